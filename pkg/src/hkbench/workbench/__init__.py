"""Ring files, results cache, corpus runner and CLI."""
