"""16-bit PGM for analysis images and HSV phase renders for complex fields"""
import io
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from FileFormats.Atomic import atomic_write
from utils.errors import SimEquivError

PGM_MAX = 65535


def encode_pgm(image: np.ndarray) -> bytes:
    """Binary P5 graymap scaled to PGM_MAX; +y points up, so grid row n-1 is written first"""
    values = np.asarray(image, dtype=float)
    if values.ndim != 2:
        raise SimEquivError("PGM images must be two-dimensional", {"shape": list(values.shape)})
    values = np.clip(np.nan_to_num(values), 0.0, None)
    peak = values.max()
    scaled = np.zeros_like(values) if peak <= 0 else values / peak * PGM_MAX
    samples = np.ascontiguousarray(np.rint(np.flipud(scaled)).astype(np.uint16))
    buffer = io.BytesIO()
    Image.fromarray(samples).save(buffer, format="PPM")
    return buffer.getvalue()


def decode_pgm(payload: bytes) -> np.ndarray:
    """Back to [iy, ix] order; values stay in sample units"""
    if not payload.startswith(b"P5"):
        raise SimEquivError("not a binary PGM", {"magic": payload[:2].decode("ascii", "replace")})
    try:
        with Image.open(io.BytesIO(payload)) as img:
            samples = np.asarray(img)
    except (UnidentifiedImageError, ValueError, OSError) as e:
        raise SimEquivError(f"unreadable PGM: {e}", {"size": len(payload)}) from e
    return np.flipud(samples).astype(float)


def write_pgm(path, image: np.ndarray) -> Path:
    return atomic_write(path, encode_pgm(image))


def read_pgm(path) -> np.ndarray:
    return decode_pgm(Path(path).read_bytes())


def phase_image(values: np.ndarray) -> Image.Image:
    """Hue is the phase (red = positive real), value is the magnitude"""
    values = np.asarray(values, dtype=complex)
    hue = np.mod(np.angle(values), 2 * np.pi) / (2 * np.pi)
    magnitude = np.abs(values)
    peak = magnitude.max()
    brightness = magnitude / peak if peak > 0 else magnitude
    hsv = np.stack([hue * 255, np.full_like(hue, 255), brightness * 255], axis=-1)
    hsv = np.flipud(np.rint(hsv).astype(np.uint8))
    bands = [Image.fromarray(np.ascontiguousarray(hsv[:, :, i])) for i in range(3)]
    return Image.merge("HSV", bands).convert("RGB")


def write_phase_png(path, values: np.ndarray) -> Path:
    buffer = io.BytesIO()
    phase_image(values).save(buffer, format="PNG")
    return atomic_write(path, buffer.getvalue())
