"""
Configuration module for the geometric discord toolkit.
"""

from functools import lru_cache
from pathlib import Path
from typing import Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel
from pydantic_settings import BaseSettings

# Get the absolute paths
ROOT_DIR = Path(__file__).parent.parent.absolute()
BACKEND_DIR = Path(__file__).parent.absolute()

# Load environment variables from both files if they exist
root_env_file = ROOT_DIR / '.env'
backend_env_file = BACKEND_DIR / '.env'

if root_env_file.exists():
    load_dotenv(root_env_file)

if backend_env_file.exists():
    load_dotenv(backend_env_file, override=True)  # Backend env overrides root env


class Tolerances(BaseModel):
    """Numerical tolerances shared by the library and the test suites."""

    eps_eq: float = 1e-12
    eps_psd: float = 1e-12
    eps_recon: float = 1e-10
    eps_deg: float = 1e-12
    eps_den: float = 1e-12
    eps_xform: float = 1e-10
    clamp_violation: float = 1e-8
    jacobi_tol: float = 1e-15
    jacobi_floor: float = 1e-30
    jacobi_max_sweeps: int = 100

    model_config = {"frozen": True}


class Settings(BaseSettings):
    """Application settings."""

    # Tolerances
    eps_eq: float = 1e-12
    eps_psd: float = 1e-12
    eps_recon: float = 1e-10
    eps_deg: float = 1e-12
    eps_den: float = 1e-12
    eps_xform: float = 1e-10
    clamp_violation: float = 1e-8

    # Eigensolver: relative pair threshold, absolute floor (times max(1, ||H||))
    jacobi_tol: float = 1e-15
    jacobi_floor: float = 1e-30
    jacobi_max_sweeps: int = 100

    # Bures optimizer
    bures_grid_lat: int = 33
    bures_grid_lon: int = 64
    bures_refine_steps: Tuple[float, ...] = (1e-3, 1e-6, 1e-10)
    bures_max_polls: int = 2000

    # Brute-force oracles
    oracle_starts: int = 5
    oracle_iterations: int = 400
    oracle_grid_level: int = 3
    oracle_bures_grid_level: int = 7
    oracle_seed: Optional[int] = None  # set: scrambled Halton starts drawn with this seed

    # Sweeps
    sweep_workers: int = 4
    sweep_progress: bool = False
    float_digits: int = 12
    output_dir: str = "data/sweeps"

    # App settings
    log_level: str = "INFO"
    log_dir: Optional[str] = None

    model_config = {
        "env_prefix": "GQD_",
        "env_file": [str(root_env_file), str(backend_env_file)],
        "case_sensitive": False,
        "extra": "ignore"
    }

    @property
    def tolerances(self) -> Tolerances:
        """Tolerance record derived from these settings."""
        return Tolerances(
            eps_eq=self.eps_eq,
            eps_psd=self.eps_psd,
            eps_recon=self.eps_recon,
            eps_deg=self.eps_deg,
            eps_den=self.eps_den,
            eps_xform=self.eps_xform,
            clamp_violation=self.clamp_violation,
            jacobi_tol=self.jacobi_tol,
            jacobi_floor=self.jacobi_floor,
            jacobi_max_sweeps=self.jacobi_max_sweeps,
        )


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached application settings.

    Returns:
        Settings object with application configuration
    """
    return Settings()


def get_tolerances() -> Tolerances:
    """Tolerance record of the cached settings."""
    return get_settings().tolerances


def settings_from_env(**overrides) -> Settings:
    """
    Build settings bypassing the cache, e.g. for a CLI run with flags.

    Args:
        **overrides: Field values taking precedence over the environment

    Returns:
        Fresh Settings object
    """
    return Settings(**overrides)

