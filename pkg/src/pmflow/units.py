"""Duration units used for reporting.

Durations are stored internally as float milliseconds. A reporting month is
the mean Gregorian month, 30.4375 days.
"""

MS_PER_SECOND = 1000.0
MS_PER_HOUR = 3_600_000.0
MS_PER_DAY = 86_400_000.0
DAYS_PER_MONTH = 30.4375
MS_PER_MONTH = DAYS_PER_MONTH * MS_PER_DAY

UNITS = {
    "ms": 1.0,
    "s": MS_PER_SECOND,
    "min": 60_000.0,
    "h": MS_PER_HOUR,
    "d": MS_PER_DAY,
    "month": MS_PER_MONTH,
}


def unit_factor(unit):
    try:
        return UNITS[unit]
    except KeyError:
        raise ValueError(f"unknown time unit {unit!r}; expected one of {sorted(UNITS)}") from None


def from_ms(value_ms, unit):
    """Convert a millisecond duration into ``unit``."""
    return value_ms / unit_factor(unit)


def to_ms(value, unit):
    return value * unit_factor(unit)


def describe_unit(unit):
    if unit == "month":
        return f"month (= {DAYS_PER_MONTH} days)"
    return unit
