import functools
import hashlib
import json
import logging
import time


def stable_seed(*parts) -> int:
    """64-bit seed from the parts, independent of PYTHONHASHSEED and call order."""
    text = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


def config_digest(obj) -> str:
    """md5 of the canonical JSON form."""
    payload = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.md5(payload.encode()).hexdigest()


def timed(func):
    """Return (result, elapsed milliseconds)."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed = (time.perf_counter() - start) * 1000
        logging.debug("%s took %.1f ms", func.__name__, elapsed)
        return result, elapsed

    return wrapper
