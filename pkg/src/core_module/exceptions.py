import json

from starlette import status


class AugmentException(Exception):
    def __init__(self, module_code: int, code: int, message: str, result):
        self.code = int(f"{module_code}{code}")
        self.message = message
        self.result = result

    def __str__(self):
        exception_data = {
            "code": self.code,
            "message": self.message,
            "result": self.result
        }
        return json.dumps(exception_data, indent=4, ensure_ascii=False)


class ParameterError(AugmentException):
    def __init__(self, module_code: int, result):
        super().__init__(module_code, status.HTTP_400_BAD_REQUEST, "BAD PARAMETER", result)


class LookupFailure(AugmentException):
    def __init__(self, module_code: int, result):
        super().__init__(module_code, status.HTTP_404_NOT_FOUND, "NOT FOUND", result)


class GeometryError(AugmentException):
    def __init__(self, module_code: int, result):
        super().__init__(module_code, status.HTTP_409_CONFLICT, "DEGENERATE GEOMETRY", result)


class ShapeError(AugmentException):
    def __init__(self, module_code: int, result):
        super().__init__(module_code, status.HTTP_422_UNPROCESSABLE_ENTITY, "SHAPE MISMATCH", result)


class CorpusEntryError(AugmentException):
    def __init__(self, module_code: int, result):
        super().__init__(module_code, status.HTTP_424_FAILED_DEPENDENCY, "ENTRY SKIPPED", result)
