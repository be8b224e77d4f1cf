# lazydet/config.py
import os


def _flag(value: str) -> bool:
    return value.strip().lower() not in ('0', 'false', 'no', 'off', '')


class Config:
    # Numerics
    SOLVER_TOLERANCE = float(os.environ.get('PMC_TOLERANCE') or 1e-12)
    MAX_ITERATIONS = int(os.environ.get('PMC_MAX_ITERATIONS') or 1_000_000)
    DIRECT_SOLVE_LIMIT = int(os.environ.get('PMC_DIRECT_SOLVE_LIMIT') or 2000)
    STOCHASTIC_TOLERANCE = 1e-12

    # Decision procedure
    FALLBACK = os.environ.get('PMC_FALLBACK') or 'multibreakpoint'
    USE_CACHE = _flag(os.environ.get('PMC_CACHE') or '1')
    THREADS = int(os.environ.get('PMC_THREADS') or 1)

    # Fuzzing
    RANDOM_SEED = int(os.environ.get('PMC_SEED') or 20240611)
    FUZZ_SCALE = float(os.environ.get('PMC_FUZZ_SCALE') or 1.0)

    LOG_LEVEL = os.environ.get('PMC_LOG_LEVEL') or 'WARNING'

    @classmethod
    def override(cls, **settings) -> type:
        """Derive a settings class with some attributes replaced"""
        unknown = [name for name in settings if not hasattr(cls, name)]
        if unknown:
            raise AttributeError(f"unknown settings: {', '.join(sorted(unknown))}")
        return type(cls.__name__, (cls,), dict(settings))


class DefaultConfig(Config):
    DEBUG = False
    TESTING = False


class TestingConfig(Config):
    DEBUG = True
    TESTING = True
    # Keep fuzz runs small unless explicitly scaled up
    FUZZ_SCALE = float(os.environ.get('PMC_FUZZ_SCALE') or 0.2)


config = {
    'default': DefaultConfig,
    'testing': TestingConfig,
}
