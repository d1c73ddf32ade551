from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[3]

DATA_DIR = PROJECT_ROOT / "data"
DATA_OUTPUT_DIR = DATA_DIR / "output"
PLOTS_OUTPUT_DIR = DATA_OUTPUT_DIR / "plots"
