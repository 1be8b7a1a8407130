"""q-Painleve VI: exact and numeric tools for the q-difference sixth Painleve equation and its confluence."""
__version__ = "0.1.0"
