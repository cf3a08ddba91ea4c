"""samplab: hardness-aware training-set curation with human-confirmed sampling."""

__version__ = "0.1.0"
