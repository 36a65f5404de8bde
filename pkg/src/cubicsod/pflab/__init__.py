"""Finite-field and rational Pfaffian geometry: skew forms, cubic forms and point enumeration."""

from .enumeration import *  # noqa: F401,F403
from .enumeration import __all__ as _enum_all
from .fields import *  # noqa: F401,F403
from .fields import __all__ as _fields_all
from .forms import *  # noqa: F401,F403
from .forms import __all__ as _forms_all
from .io import *  # noqa: F401,F403
from .io import __all__ as _io_all
from .report import *  # noqa: F401,F403
from .report import __all__ as _report_all

__all__ = _fields_all + _forms_all + _enum_all + _io_all + _report_all
