import os
from typing import List

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Settings:
    """Application settings and configuration"""

    # Size guards
    MAX_GROUND_SIZE: int = int(os.getenv("MAX_GROUND_SIZE", "20"))
    LATTICE_SIZE_BOUND: int = int(os.getenv("LATTICE_SIZE_BOUND", "1000000"))
    ORACLE_MAX_LIFT_SIZE: int = int(os.getenv("ORACLE_MAX_LIFT_SIZE", "12"))
    BRUTE_FORCE_BOUND: int = int(os.getenv("BRUTE_FORCE_BOUND", "100000"))
    BASIS_PAIR_LIMIT: int = int(os.getenv("BASIS_PAIR_LIMIT", "20000"))

    # Randomized realization
    RANDOM_COEFF_HEIGHT: int = int(os.getenv("RANDOM_COEFF_HEIGHT", "101"))
    PG_RETRY_LIMIT: int = int(os.getenv("PG_RETRY_LIMIT", "32"))

    # Fuzzing defaults
    FUZZ_SEED: int = int(os.getenv("FUZZ_SEED", "0"))
    FUZZ_COUNT: int = int(os.getenv("FUZZ_COUNT", "200"))
    FUZZ_MAX_N: int = int(os.getenv("FUZZ_MAX_N", "4"))
    FUZZ_MAX_RANK: int = int(os.getenv("FUZZ_MAX_RANK", "4"))
    FUZZ_MAX_CAGE: int = int(os.getenv("FUZZ_MAX_CAGE", "4"))
    FUZZ_WORKERS: int = int(os.getenv("FUZZ_WORKERS", "1"))

    # FastAPI Configuration
    API_HOST: str = os.getenv("API_HOST", "127.0.0.1")
    API_PORT: int = int(os.getenv("API_PORT", "8000"))

    # Logging
    LOGS_DIR: str = os.getenv("LOGS_DIR", "./logs")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()
    LOG_TO_FILE: bool = _env_bool("LOG_TO_FILE", "true")

    @classmethod
    def validate_settings(cls) -> bool:
        """Validate that all bounds are usable"""
        problems: List[str] = []

        positive = [
            "LATTICE_SIZE_BOUND",
            "ORACLE_MAX_LIFT_SIZE",
            "BRUTE_FORCE_BOUND",
            "BASIS_PAIR_LIMIT",
            "RANDOM_COEFF_HEIGHT",
            "PG_RETRY_LIMIT",
            "FUZZ_WORKERS",
        ]
        for name in positive:
            if getattr(cls, name) <= 0:
                problems.append(f"{name} must be positive")

        if not 0 <= cls.MAX_GROUND_SIZE <= 20:
            problems.append("MAX_GROUND_SIZE must lie in [0, 20]")

        if not 0 <= cls.FUZZ_MAX_N <= 5:
            problems.append("FUZZ_MAX_N must lie in [0, 5]")
        if not 0 <= cls.FUZZ_MAX_RANK <= 5:
            problems.append("FUZZ_MAX_RANK must lie in [0, 5]")
        if not 0 <= cls.FUZZ_MAX_CAGE <= 4:
            problems.append("FUZZ_MAX_CAGE must lie in [0, 4]")

        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            problems.append(f"LOG_LEVEL {cls.LOG_LEVEL!r} is not a logging level")

        if problems:
            raise ValueError(f"Invalid configuration: {'; '.join(problems)}")

        return True

    @classmethod
    def create_directories(cls) -> None:
        """Create necessary directories if they don't exist"""
        if cls.LOG_TO_FILE:
            os.makedirs(cls.LOGS_DIR, exist_ok=True)


# Create settings instance
settings = Settings()
