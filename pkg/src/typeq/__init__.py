"""Type-Q sets in F_{q^2} x F_{q^2}, their spreads, and exact verification."""
from .errors import TypeQError
from .geometry import Bundle, PointSet, Spread
from .gfcore import FieldElement, FieldTable, build_field

__all__ = ["Bundle", "FieldElement", "FieldTable", "PointSet", "Spread", "TypeQError", "build_field"]
__version__ = "0.1.0"
