from boardhdl.library.registry import LibraryRegistry
from boardhdl.library.series import E12, E24, StandardSeries, nearest_standard_value
from boardhdl.library.stdlib import standard_library

__all__ = ["LibraryRegistry", "E12", "E24", "StandardSeries", "nearest_standard_value", "standard_library"]
