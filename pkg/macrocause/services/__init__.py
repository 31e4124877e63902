"""Services package."""
from .distribution_service import distribution_service
from .equivalence_service import equivalence_service
from .report_service import report_service

__all__ = ["distribution_service", "equivalence_service", "report_service"]
