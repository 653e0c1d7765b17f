"""Information measures on finite categories, with a property audit.

The library models communication systems as morphisms in small concrete
categories (finite sets, noisy codings, probability spaces, vector
spaces, and their duals) and measures information flow along them.  The
audit harness checks the defining laws of such measures on generated
corpora and produces deterministic, replayable violation reports.
"""

from . import dual as _dual  # noqa: F401  (registers categories)
from . import finprob as _finprob  # noqa: F401
from . import finset as _finset  # noqa: F401
from . import finvect as _finvect  # noqa: F401
from . import noisy as _noisy  # noqa: F401
from .audit import (
    AuditConfig,
    AuditReport,
    Violation,
    audit_all,
    audit_axioms,
    audit_propositions,
    generate,
    replay,
)
from .capacity import CapacityResult, Channel, blahut_arimoto, mutual_information
from .config import get_log_base, log_base, set_log_base
from .core import (
    UNDEFINED,
    CategoryId,
    Limits,
    category,
    compose,
    external_product,
    identity,
    internal_product,
    is_undefined,
    terminal_object,
    unique_to_terminal,
)
from .errors import InfoCatError
from .exact import LogVal
from .measures import get_measure, measure_names, value_of

__all__ = [
    "AuditConfig",
    "AuditReport",
    "CapacityResult",
    "CategoryId",
    "Channel",
    "InfoCatError",
    "Limits",
    "LogVal",
    "UNDEFINED",
    "Violation",
    "audit_all",
    "audit_axioms",
    "audit_propositions",
    "blahut_arimoto",
    "category",
    "compose",
    "external_product",
    "generate",
    "get_log_base",
    "get_measure",
    "identity",
    "internal_product",
    "is_undefined",
    "log_base",
    "measure_names",
    "mutual_information",
    "replay",
    "set_log_base",
    "terminal_object",
    "unique_to_terminal",
    "value_of",
]
