"""Canonical order of the six toxicity labels.

Every part of the package (CSV columns, label vectors, model outputs, metric
reports, serialized files) uses exactly this order.
"""

LABELS = ("toxic", "severe_toxic", "obscene", "threat", "insult", "identity_hate")
NUM_LABELS = len(LABELS)
