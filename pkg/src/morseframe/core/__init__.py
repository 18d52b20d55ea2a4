"""Core functionality for morseframe."""
