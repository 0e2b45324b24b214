from src.config import Config

app_config = Config()
