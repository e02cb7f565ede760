import csv
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toxdetect.labels import LABELS

# id, text, then the six labels in canonical order
TOY_ROWS = [
    ("c01", "You are an idiot and a fool", 1, 0, 0, 0, 1, 0),
    ("c02", "Have a wonderful day my friend", 0, 0, 0, 0, 0, 0),
    ("c03", "I will kill you, you idiot", 1, 1, 0, 1, 1, 0),
    ("c04", "What a lovely picture of the sea", 0, 0, 0, 0, 0, 0),
    ("c05", "Total idiot garbage, worthless human", 1, 0, 1, 0, 1, 0),
    ("c06", "Thanks for the helpful edit yesterday", 0, 0, 0, 0, 0, 0),
    ("c07", "Shut up you stupid ugly fool", 1, 0, 1, 0, 1, 1),
    ("c08", "The article needs more reliable sources", 0, 0, 0, 0, 0, 0),
    ("c09", "Nobody likes you, go away idiot", 1, 0, 0, 0, 1, 0),
    ("c10", "I agree with the proposed merge", 0, 0, 0, 0, 0, 0),
]


def write_csv(path, rows, header=None):
    header = header or ["id", "comment_text", *LABELS]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


@pytest.fixture
def toy_csv(tmp_path):
    return write_csv(tmp_path / "toy.csv", TOY_ROWS)
