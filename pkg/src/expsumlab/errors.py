"""Shared error types.

Counting routines promise exact results within 128-bit magnitude; anything
larger raises OverflowError (the built-in) rather than wrapping around.
Desk-scale guards (table sizes, tuple counts) raise GuardError so the CLI can
map them to a dedicated exit code.
"""

COUNT_LIMIT = 1 << 128


class GuardError(ValueError):
    """A desk-scale resource guard was violated (table too big, etc.)."""


def check_count(value: int, context: str) -> int:
    """Return ``value`` unchanged if it fits in 128 bits, else raise."""
    if value >= COUNT_LIMIT:
        raise OverflowError(f"{context}: exact count exceeds 128 bits")
    return value
