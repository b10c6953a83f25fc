"""The six prompt categories and the combined Finance segment."""

from __future__ import annotations

CATEGORIES = (
    "Academic & Research",
    "Corporate Finance & FP&A",
    "Creative & Generative",
    "Operations & Supply Chain",
    "Professional Finance",
    "SMB & Personal",
)

# "Finance" is an analysis-time merge of the two finance-flavored categories.
FINANCE_SEGMENT = "Finance"
FINANCE_MEMBERS = ("Professional Finance", "Corporate Finance & FP&A")


def expand_category_filter(category_filter: str | list[str] | tuple[str, ...]) -> set[str]:
    if isinstance(category_filter, str):
        names = [category_filter]
    else:
        names = list(category_filter)
    out: set[str] = set()
    for name in names:
        if name == FINANCE_SEGMENT:
            out.update(FINANCE_MEMBERS)
        else:
            out.add(name)
    return out
