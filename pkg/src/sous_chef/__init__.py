"""Snapshot-driven cooking assistant: perception, recipes, chat, and service."""

__version__ = "0.1.0"
