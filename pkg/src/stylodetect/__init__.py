"""stylodetect: coding-style stylometry for LLM code-paraphrase detection."""

__version__ = "0.1.0"
