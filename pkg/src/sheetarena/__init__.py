"""sheetarena: a preference arena for LLM-generated spreadsheet workbooks."""

__version__ = "0.1.0"
