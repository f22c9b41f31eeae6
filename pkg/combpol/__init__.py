"""combpol - combinatorial polarization of polynomial mappings over finite fields and Q."""
import logging

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())
