def timeof_fmt(seconds: int | float):
    periods = [("d", 86400), ("h", 3600), ("m", 60), ("s", 1)]
    result = ""
    for period_name, period_seconds in periods:
        if seconds >= period_seconds:
            period_value, seconds = divmod(seconds, period_seconds)
            result += f"{int(period_value)}{period_name}"
    return result or "0s"


def bits_fmt(value: float, digits: int = 6) -> str:
    """Entropy-style numbers: fixed digits, 'inf' kept readable."""
    if value != value:
        return "nan"
    if value in (float("inf"), float("-inf")):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def table_fmt(rows: list[tuple[str, object]], header: str = "") -> str:
    """Two-column name/value block for stdout summaries."""
    width = max((len(name) for name, _ in rows), default=0)
    lines = [header, "-" * max(len(header), width + 12)] if header else []
    for name, value in rows:
        shown = bits_fmt(value) if isinstance(value, float) else str(value)
        lines.append(f"{name.ljust(width)}  {shown}")
    return "\n".join(lines)
