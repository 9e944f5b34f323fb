import os
from dotenv import load_dotenv


class Settings:
    def __init__(self):
        load_dotenv()

        self.functor_cap: int = int(
            os.getenv("FINMODEL_FUNCTOR_CAP", "4096"))
        self.enum_budget: int = int(
            os.getenv("FINMODEL_ENUM_BUDGET", "250000"))
        self.naive_oracle_limit: int = int(
            os.getenv("FINMODEL_NAIVE_ORACLE_LIMIT", "10"))
        self.workers: int = int(os.getenv("FINMODEL_WORKERS", "1"))

        self.output_dir: str = os.getenv("FINMODEL_OUTPUT_DIR", "output")
        self.log_level: str = os.getenv("FINMODEL_LOG_LEVEL", "INFO").upper()

        self._validate_settings()

    def _validate_settings(self):
        if self.functor_cap <= 0:
            raise ValueError(
                f"FINMODEL_FUNCTOR_CAP must be positive, got {self.functor_cap}. "
                "It bounds the number of objects of a functor category."
            )

        if self.enum_budget <= 0:
            raise ValueError(
                f"FINMODEL_ENUM_BUDGET must be positive, got {self.enum_budget}."
            )

        if self.naive_oracle_limit < 0:
            raise ValueError(
                "FINMODEL_NAIVE_ORACLE_LIMIT must be zero or positive, "
                f"got {self.naive_oracle_limit}."
            )

        if self.workers < 1:
            raise ValueError(
                f"FINMODEL_WORKERS must be at least 1, got {self.workers}."
            )

        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(
                f"FINMODEL_LOG_LEVEL must be a logging level name, got {self.log_level}."
            )


settings = Settings()
