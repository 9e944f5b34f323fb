"""finmodel: model structures on finite categories."""

__version__ = "0.1.0"
