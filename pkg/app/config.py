from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

FIXTURES_DIR = Path(__file__).parent / "fixtures"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env")

    mpf_api_token: str | None = None
    mpf_fixtures_dir: str = str(FIXTURES_DIR)

    # Dense simulation limits (2^12 = 4096 dimensional matrices at most)
    mpf_max_sites: int = 12
    mpf_desk_max_sites: int = 8

    # Search and sweep knobs
    mpf_max_workers: int = 1
    mpf_max_steps: int = 2**16
    mpf_exhaustive_max_m: int = 6
    mpf_default_scale_factor: float = 0.999

settings = Settings()
