"""Raster operations behind the instruments.

All PNG encoding funnels through ``encode_png`` with fixed parameters, so
identical pixel data always yields identical bytes — the crop pipeline relies
on this for its identity guarantee (a full-image selection reproduces the
source bytes exactly).
"""

from __future__ import annotations

import io
import math
from typing import Sequence

from PIL import Image, ImageChops, ImageDraw

from ..errors import BadCropRect, DegeneratePolygon, OutOfBounds
from .collage import CropRect
from .intents import SketchStroke

Polygon = Sequence[tuple[float, float]]


def encode_png(image: Image.Image) -> bytes:
    buf = io.BytesIO()
    image.convert("RGBA").save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> Image.Image:
    return Image.open(io.BytesIO(data)).convert("RGBA")


def png_size(data: bytes) -> tuple[int, int]:
    with Image.open(io.BytesIO(data)) as img:
        return img.size


def solid_png(color: tuple[int, int, int], width: int = 512, height: int = 512) -> bytes:
    return encode_png(Image.new("RGBA", (width, height), color + (255,)))


def polygon_bbox(polygon: Polygon) -> tuple[int, int, int, int]:
    left = math.floor(min(x for x, _ in polygon))
    top = math.floor(min(y for _, y in polygon))
    right = math.ceil(max(x for x, _ in polygon))
    bottom = math.ceil(max(y for _, y in polygon))
    return left, top, right, bottom


def mask_crop(data: bytes, polygon: Polygon) -> tuple[bytes, CropRect]:
    """Crop the polygon's bounding box, turning outside-polygon pixels transparent.

    The writer's literal selection is preserved: nothing outside the lasso is
    invented or filled. Raises DegeneratePolygon for < 3 vertices or a
    zero-area bounding box, OutOfBounds for vertices off the image.
    """
    points = [(float(x), float(y)) for x, y in polygon]
    if len(points) < 3:
        raise DegeneratePolygon(f"polygon needs >= 3 vertices, got {len(points)}")

    image = decode_png(data)
    width, height = image.size
    for x, y in points:
        if not (0 <= x <= width and 0 <= y <= height):
            raise OutOfBounds(f"vertex ({x},{y}) outside {width}x{height} image")

    left, top, right, bottom = polygon_bbox(points)
    right = min(right, width)
    bottom = min(bottom, height)
    if right <= left or bottom <= top:
        raise DegeneratePolygon("polygon bounding box has zero area")

    mask = Image.new("L", (width, height), 0)
    ImageDraw.Draw(mask).polygon(points, fill=255)

    channels = image.split()
    alpha = ImageChops.multiply(channels[3], mask)
    masked = Image.merge("RGBA", channels[:3] + (alpha,))
    crop = masked.crop((left, top, right, bottom))
    return encode_png(crop), CropRect(
        left=left, top=top, width=right - left, height=bottom - top
    )


def rect_crop(data: bytes, rect: CropRect) -> bytes:
    """Plain rectangular crop for collage pieces; rect must fit the image."""
    image = decode_png(data)
    width, height = image.size
    if rect.left + rect.width > width or rect.top + rect.height > height:
        raise BadCropRect(
            f"rect {rect.to_dict()} exceeds {width}x{height} source image"
        )
    crop = image.crop(
        (rect.left, rect.top, rect.left + rect.width, rect.top + rect.height)
    )
    return encode_png(crop)


def rasterize_strokes(
    strokes: Sequence[SketchStroke], pad: int = 8, line_width: int = 3
) -> bytes:
    """Render sketch polylines to a PNG scaffold (black ink on white)."""
    points = [p for stroke in strokes for p in stroke]
    if not points:
        raise DegeneratePolygon("no stroke points to rasterize")
    left, top, right, bottom = polygon_bbox(points)
    width = max(right - left, 1) + 2 * pad
    height = max(bottom - top, 1) + 2 * pad

    canvas = Image.new("RGBA", (width, height), (255, 255, 255, 255))
    draw = ImageDraw.Draw(canvas)
    for stroke in strokes:
        shifted = [(x - left + pad, y - top + pad) for x, y in stroke]
        if len(shifted) == 1:
            draw.point(shifted[0], fill=(0, 0, 0, 255))
        else:
            draw.line(shifted, fill=(0, 0, 0, 255), width=line_width)
    return encode_png(canvas)
