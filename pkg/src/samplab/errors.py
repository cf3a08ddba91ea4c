"""Exception hierarchy shared by all modules.

Every error carries a stable ``code`` string; the HTTP layer maps codes to
status codes without inspecting messages.
"""


class SamplabError(Exception):
    code = "internal_error"


class DatasetLoadError(SamplabError):
    """CSV could not be parsed into a valid dataset."""

    code = "dataset_load"


class StratificationError(SamplabError):
    """A class is too small to be split across both partitions."""

    code = "cannot_stratify"


class UnknownInstanceError(SamplabError):
    """An instance id is not present where it was expected."""

    code = "unknown_instance"


class TestSetViolationError(SamplabError):
    """An operation attempted to modify a test instance."""

    __test__ = False  # keep pytest from collecting this as a test class
    code = "test_set_violation"


class InvalidParameterError(SamplabError):
    """A parameter is outside its documented domain."""

    code = "invalid_parameter"


class EmptyScopeError(SamplabError):
    """Scope resolution produced nothing to sample."""

    code = "empty_scope"


class DegenerateClassError(SamplabError):
    """A class has too few (or zero) instances for the requested operation."""

    code = "degenerate_training"

    def __init__(self, message, class_name=None):
        super().__init__(message)
        self.class_name = class_name


class StaleSuggestionError(SamplabError):
    """Suggestion was generated against an older dataset version."""

    code = "stale_suggestion"

    def __init__(self, message, current_version=None):
        super().__init__(message)
        self.current_version = current_version


class SessionImportError(SamplabError):
    """Session JSON failed schema validation."""

    code = "import_schema"


class DatasetMismatchError(SamplabError):
    """Dataset content hash does not match the referenced one."""

    code = "dataset_mismatch"


class NotFoundError(SamplabError):
    """Unknown session, dataset, or job id."""

    code = "not_found"
