"""Hadamard spin models, their Nomura algebras and exact verification tools."""

from .hadamard import HadamardMatrix, paley1, standard, sylvester, validate
from .models import build_model, type2_check, type3_check
from .nomura import membership_test, nomura_algebra, nomura_graph
from .numbers import Monomial, Verdict, make_context
from .report import VerificationReport
from .verify import RunManifest, verify_all, verify_remark, verify_theorem

__version__ = "0.1.0"

__all__ = [
    "HadamardMatrix", "Monomial", "RunManifest", "Verdict", "VerificationReport",
    "build_model", "make_context", "membership_test", "nomura_algebra", "nomura_graph",
    "paley1", "standard", "sylvester", "type2_check", "type3_check", "validate",
    "verify_all", "verify_remark", "verify_theorem",
]
