"""Regular trees, their monads and distributive laws, substitutions, and parity tree automata."""

__version__ = "0.1.0"
