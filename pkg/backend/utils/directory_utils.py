import os
import logging
from pathlib import Path
from typing import Optional, Union

logger = logging.getLogger(__name__)


def ensure_directory_structure(base_dir: Optional[str] = None) -> dict:
    """
    Ensures that the output directories used by sweeps and logs exist.

    Args:
        base_dir: Base directory path. If None, uses the repository root.

    Returns:
        Dictionary with paths to all required directories
    """
    if base_dir is None:
        base_dir = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

    base_path = Path(base_dir)
    directories = {
        "data": base_path / "data",
        "sweeps": base_path / "data" / "sweeps",
        "logs": base_path / "logs",
    }

    for name, path in directories.items():
        os.makedirs(path, exist_ok=True)
        logger.debug(f"Ensured directory exists: {path}")

    return directories


def ensure_parent_directory(path: Union[str, Path]) -> Path:
    """Create the parent directory of an output file if needed and return the path."""
    target = Path(path)
    if target.parent and not target.parent.exists():
        os.makedirs(target.parent, exist_ok=True)
        logger.info(f"Created output directory: {target.parent}")
    return target
