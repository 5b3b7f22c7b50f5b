"""
Main entry point for banachkit.
This allows running the CLI as: python -m banachkit
"""

from .app import main

if __name__ == "__main__":
    main()
