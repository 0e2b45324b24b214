from typing import Any

from pydantic import BaseModel
from starlette import status

from src.core_module.exceptions import AugmentException


class Response(BaseModel):
    """기본 API 응답 포맷 by AI플랫폼 Restful API 디자인 가이드"""
    code: int = 200000
    message: str = "API response success"
    result: Any

    @classmethod
    def from_result(cls, module_code: int, result: Any) -> 'Response':
        return cls(code=int(f"{module_code}{status.HTTP_200_OK}"), result=result)

    @classmethod
    def from_exception(cls, exc: AugmentException) -> 'Response':
        """오류도 HTTP 200으로 내려가며 code에 module code와 오류 종류가 담깁니다."""
        return cls(code=exc.code, message=exc.message, result=exc.result)
