class AssessmentError(Exception):
    pass


class AssessmentInputError(AssessmentError, ValueError):
    exit_code = 2


class AssessmentIOError(AssessmentError, OSError):
    exit_code = 4


class ScoreOutOfRangeError(AssessmentInputError):
    pass


class EmptyCohortError(AssessmentInputError):
    pass


class DegenerateMembershipError(AssessmentInputError):
    pass


class InvalidScaleError(AssessmentInputError):
    pass


class InvalidDistributionError(AssessmentInputError):
    pass


class InvalidConfigError(AssessmentInputError):
    pass


class GradeCountMismatchError(AssessmentInputError):
    pass


class UnknownGradeError(AssessmentInputError):
    pass


class MalformedInputError(AssessmentInputError):
    pass


class ModelMisuseError(AssessmentInputError):
    pass


class DegenerateFigureError(AssessmentInputError):
    pass


class CogRangeError(AssessmentError):
    exit_code = 3
