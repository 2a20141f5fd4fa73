from fastapi import FastAPI
from xsdmerge.configuration import Configuration
from xsdmerge.routes.api import router as api_router

Configuration.from_environment().configure_logging()

app = FastAPI(title="xsdmerge", description="XML Schema matching and integration at a chosen severity")

app.include_router(api_router)
