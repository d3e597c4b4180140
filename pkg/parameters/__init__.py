"""Gallery registry JSON package."""
