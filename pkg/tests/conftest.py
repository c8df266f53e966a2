import sys
from pathlib import Path

# Make the package importable straight from the source tree and let test
# modules share helpers.py without installing anything.
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))
