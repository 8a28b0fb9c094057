"""tightforest: exact Turan-number workbench for tight linear forests."""

__version__ = "0.1.0"
