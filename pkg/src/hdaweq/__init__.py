"""Higher-dimensional automata over concurrent alphabets: languages, homology and reduction."""

__version__ = "0.1.0"
