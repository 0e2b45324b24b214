from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from starlette.middleware.cors import CORSMiddleware
from starlette.responses import JSONResponse
from uvicorn import Config, Server

from src.config import DESCRIPTION
from src.core_module.exceptions import AugmentException
from src.corpus_module import router as corpus_router
from src.logger import LOG_LEVEL, setup_logging
from src.pipeline_module import router as pipeline_router
from src.response import Response

app = FastAPI(
    title="AugUS Engine",
    description=DESCRIPTION,
    version="0.1.0",
)

app.include_router(pipeline_router.router)
app.include_router(corpus_router.router)


@app.exception_handler(AugmentException)
def augment_exception_handler(request: Request, exc: AugmentException):
    return JSONResponse(status_code=200, content=jsonable_encoder(Response.from_exception(exc)))


origins = [
    "*",
    "http://localhost",
    "http://localhost:8080",
    "http://localhost:3000"
]
app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def serve(host: str = "0.0.0.0", port: int = 8000):
    server = Server(
        Config(
            "src.main:app",
            host=host,
            port=port,
            log_level=LOG_LEVEL,
        ),
    )

    setup_logging()
    server.run()


if __name__ == "__main__":
    serve()
