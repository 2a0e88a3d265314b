"""
Render Service

Draws queue evolution as a binary PGM: one row per sampled step, the front
of the queue on the left.
"""

from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from models.exceptions import EmptyTraceError
from models.simulation import Snapshot

BACKGROUND = 255
MARKER = 64
LIGHTEST_SYMBOL = 160


def default_palette(glyphs: str) -> Dict[str, int]:
    """First glyph lightest (160), last glyph black."""
    if len(glyphs) == 1:
        return {glyphs: 0}
    last = len(glyphs) - 1
    return {glyph: (LIGHTEST_SYMBOL * (last - index)) // last for index, glyph in enumerate(glyphs)}


def render_evolution(snapshots: Sequence[Snapshot], glyphs: str,
                     palette: Optional[Dict[str, int]] = None, epoch_markers: bool = False) -> bytes:
    """Encode snapshots as PGM bytes.

    Raises:
        EmptyTraceError: if there are no snapshots.
    """
    if not snapshots:
        raise EmptyTraceError()
    levels = palette or default_palette(glyphs)
    lookup = np.full(256, BACKGROUND, dtype=np.uint8)
    for glyph, level in levels.items():
        lookup[ord(glyph)] = level

    width = max(1, max(len(snapshot.queue) for snapshot in snapshots))
    rows: List[np.ndarray] = []
    previous_epoch = snapshots[0].epoch
    for snapshot in snapshots:
        if epoch_markers and snapshot.epoch != previous_epoch:
            rows.append(np.full(width, MARKER, dtype=np.uint8))
        previous_epoch = snapshot.epoch

        row = np.full(width, BACKGROUND, dtype=np.uint8)
        if snapshot.queue:
            codes = np.frombuffer(snapshot.queue.encode("ascii"), dtype=np.uint8)
            row[:codes.size] = lookup[codes]
        rows.append(row)

    image = np.vstack(rows)
    header = f"P5\n{width} {image.shape[0]}\n255\n".encode("ascii")
    logger.debug(f"Rendered {image.shape[0]} rows of width {width}")
    return header + image.tobytes()


class RenderService:
    """Service for evolution images."""

    def render(self, snapshots: Sequence[Snapshot], glyphs: str, epoch_markers: bool = False) -> bytes:
        return render_evolution(snapshots, glyphs, epoch_markers=epoch_markers)
