def fnv1a(data: bytes) -> int:
    """Compute the FNV-1a 32-bit hash of ``data``."""
    h = 0x811C9DC5
    size = 1 << 32
    for byte in data:
        h = h ^ byte
        h = (h * 0x01000193) % size
    return h
