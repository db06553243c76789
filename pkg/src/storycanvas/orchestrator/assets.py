"""Content-addressed in-memory image store.

Asset ids are the sha256 of the PNG bytes, so identical content dedupes and
exports can reference blobs by hash. Safe for concurrent use: puts of equal
content are idempotent and the dict is only ever grown.
"""

from __future__ import annotations

import hashlib

from ..errors import UnknownAsset
from ..model.cards import ImageAssetRef
from ..instruments.imaging import png_size


def content_id(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


class AssetStore:
    def __init__(self):
        self._blobs: dict[str, bytes] = {}

    def put(self, data: bytes) -> ImageAssetRef:
        asset_id = content_id(data)
        width, height = png_size(data)
        self._blobs[asset_id] = data
        return ImageAssetRef(asset_id=asset_id, width=width, height=height)

    def get(self, asset_id: str) -> bytes:
        try:
            return self._blobs[asset_id]
        except KeyError:
            raise UnknownAsset(f"unknown asset: {asset_id}") from None

    def has(self, asset_id: str) -> bool:
        return asset_id in self._blobs

    def ref(self, asset_id: str) -> ImageAssetRef:
        data = self.get(asset_id)
        width, height = png_size(data)
        return ImageAssetRef(asset_id=asset_id, width=width, height=height)
