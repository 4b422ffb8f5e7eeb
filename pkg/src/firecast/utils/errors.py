"""
Error classes with categorization and context for firecast.
"""
from enum import Enum
from typing import Any, Dict, Optional


class ErrorCategory(Enum):
    """Error categories, each mapped to a process exit code."""
    USAGE = "usage"            # Bad arguments or configuration
    DATA = "data"              # Cube, sample or checkpoint problem
    NUMERICAL = "numerical"    # Non-finite values during training
    SYSTEM = "system"          # I/O failure

    @property
    def exit_code(self) -> int:
        """Exit code the CLI returns for this category."""
        return _EXIT_CODES[self]


_EXIT_CODES = {
    ErrorCategory.USAGE: 1,
    ErrorCategory.DATA: 2,
    ErrorCategory.NUMERICAL: 3,
    ErrorCategory.SYSTEM: 2,
}


class FirecastError(ValueError):
    """
    Base error class for firecast operations with categorization and context.

    Inherits from ValueError so callers that only know about ValueError
    still catch it.
    """

    def __init__(
        self,
        message: str,
        category: ErrorCategory = ErrorCategory.DATA,
        context: Optional[Dict[str, Any]] = None,
        suggestion: Optional[str] = None
    ):
        super().__init__(message)
        self.category = category
        self.context = context or {}
        self.suggestion = suggestion


class FirecastValidationError(FirecastError):
    """Error for invalid arguments or configuration values."""

    def __init__(self, message: str, field: Optional[str] = None, **kwargs):
        kwargs.setdefault('category', ErrorCategory.USAGE)

        if field:
            context = kwargs.get('context', {})
            context['field'] = field
            kwargs['context'] = context
            kwargs.setdefault(
                'suggestion',
                f"Please check the {field} value and try again."
            )

        super().__init__(message, **kwargs)
        self.field = field


class ShapeError(FirecastValidationError):
    """Error for tensor shape disagreement inside nn-core."""

    def __init__(self, message: str, shapes: Optional[Dict[str, Any]] = None, **kwargs):
        if shapes:
            context = kwargs.get('context', {})
            context['shapes'] = shapes
            kwargs['context'] = context
        super().__init__(message, **kwargs)


class CubeFormatError(FirecastError):
    """Error for unreadable, malformed or inconsistent datacubes."""

    def __init__(self, message: str, path: Optional[str] = None, **kwargs):
        kwargs.setdefault('category', ErrorCategory.DATA)
        if path:
            context = kwargs.get('context', {})
            context['path'] = path
            kwargs['context'] = context
        kwargs.setdefault('suggestion', get_error_suggestion("cube_format", {"path": path}))
        super().__init__(message, **kwargs)
        self.path = path


class SampleError(FirecastError):
    """Error for samples that cannot be built from the cube."""

    def __init__(self, message: str, **kwargs):
        kwargs.setdefault('category', ErrorCategory.DATA)
        super().__init__(message, **kwargs)


class MetricError(FirecastError):
    """Error for metrics that are undefined on the given input."""

    def __init__(self, message: str, **kwargs):
        kwargs.setdefault('category', ErrorCategory.DATA)
        super().__init__(message, **kwargs)


class CheckpointError(FirecastError):
    """Error for missing or corrupt parameter checkpoints."""

    def __init__(self, message: str, path: Optional[str] = None, **kwargs):
        kwargs.setdefault('category', ErrorCategory.DATA)
        if path:
            context = kwargs.get('context', {})
            context['path'] = path
            kwargs['context'] = context
        kwargs.setdefault('suggestion', get_error_suggestion("checkpoint_missing", {"path": path}))
        super().__init__(message, **kwargs)
        self.path = path


class NumericalError(FirecastError):
    """Error for non-finite losses or parameters."""

    def __init__(self, message: str, epoch: Optional[int] = None, **kwargs):
        kwargs.setdefault('category', ErrorCategory.NUMERICAL)
        if epoch is not None:
            context = kwargs.get('context', {})
            context['epoch'] = epoch
            kwargs['context'] = context
        kwargs.setdefault('suggestion', get_error_suggestion("divergence", {"epoch": epoch}))
        super().__init__(message, **kwargs)
        self.epoch = epoch


def get_error_suggestion(error_type: str, context: Optional[Dict[str, Any]] = None) -> str:
    """
    Get contextual error suggestions based on error type and context.

    Args:
        error_type: Type of error (e.g., "cube_format", "divergence")
        context: Additional context for generating suggestions

    Returns:
        Helpful suggestion message
    """
    context = context or {}

    suggestions = {
        "cube_format": _get_cube_format_suggestion(context),
        "checkpoint_missing": _get_checkpoint_suggestion(context),
        "divergence": _get_divergence_suggestion(context),
        "no_positives": "The evaluation split contains no fires. Use a longer split or another cube.",
        "validation_failed": _get_validation_suggestion(context),
    }

    return suggestions.get(error_type, "Use 'firecast --help' for usage information.")


def _get_cube_format_suggestion(context: Dict[str, Any]) -> str:
    """Generate suggestion for cube format errors."""
    path = context.get("path")
    if path:
        return f"Check that '{path}' was written by 'firecast gen-synthetic' or follows the cube format."
    return "Check that the cube directory contains header.json, mask.u8 and one .f32 file per variable."


def _get_checkpoint_suggestion(context: Dict[str, Any]) -> str:
    """Generate suggestion for checkpoint errors."""
    path = context.get("path")
    if path:
        return f"Run 'firecast train' first or point --checkpoint at an existing directory (got '{path}')."
    return "Run 'firecast train' first to create a checkpoint."


def _get_divergence_suggestion(context: Dict[str, Any]) -> str:
    """Generate suggestion for diverging training runs."""
    epoch = context.get("epoch")
    where = f" at epoch {epoch}" if epoch is not None else ""
    return f"Training diverged{where}. Try a smaller learning rate."


def _get_validation_suggestion(context: Dict[str, Any]) -> str:
    """Generate suggestion for validation errors."""
    field = context.get("field", "input")
    return f"Please check the {field} value and try again."
