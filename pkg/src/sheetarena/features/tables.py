"""Table detection: 4-connected components of non-empty cells."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..sheetspec.addresses import CellAddress
from ..sheetspec.model import Sheet

MIN_TABLE_CELLS = 4
MIN_TABLE_SPAN = 2


@dataclass(frozen=True)
class TableRegion:
    sheet: str
    min_row: int
    max_row: int
    min_col: int
    max_col: int
    cell_count: int

    @property
    def row_span(self) -> int:
        return self.max_row - self.min_row + 1

    @property
    def col_span(self) -> int:
        return self.max_col - self.min_col + 1

    def row_interval(self) -> tuple[int, int]:
        return self.min_row, self.max_row

    def col_interval(self) -> tuple[int, int]:
        return self.min_col, self.max_col


def detect_tables(sheet: Sheet) -> list[TableRegion]:
    """Connected components that qualify as tables.

    A component qualifies iff it has >= 4 cells and its bounding box spans
    >= 2 rows and >= 2 columns. Regions come back in row-major order of
    their top-left corner.
    """
    occupied = {c.address for c in sheet.cells if not c.is_blank()}
    seen: set[CellAddress] = set()
    regions: list[TableRegion] = []
    for start in sorted(occupied):
        if start in seen:
            continue
        component: list[CellAddress] = []
        queue = deque([start])
        seen.add(start)
        while queue:
            addr = queue.popleft()
            component.append(addr)
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                neighbor = CellAddress(addr.row + dr, addr.col + dc)
                if neighbor in occupied and neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
        rows = [a.row for a in component]
        cols = [a.col for a in component]
        region = TableRegion(
            sheet=sheet.name,
            min_row=min(rows),
            max_row=max(rows),
            min_col=min(cols),
            max_col=max(cols),
            cell_count=len(component),
        )
        if (
            region.cell_count >= MIN_TABLE_CELLS
            and region.row_span >= MIN_TABLE_SPAN
            and region.col_span >= MIN_TABLE_SPAN
        ):
            regions.append(region)
    regions.sort(key=lambda r: (r.min_row, r.min_col))
    return regions
