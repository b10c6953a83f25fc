"""Cell dependency graph: reference edges, cycle detection, evaluation order.

Nodes are (canonical sheet name, CellAddress) pairs covering formula cells
and the cells they reference. Edges run from a referenced cell to the
formula that depends on it. Ranges expand to their member cells; ranges
with more than ``RANGE_EXPANSION_CAP`` members expand to occupied members
only (blank members carry no edges, so the cycle set and evaluation order
are unaffected).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from ..sheetspec.addresses import CellAddress, ColumnSpan, RangeRef, RowSpan, MAX_COLS, MAX_ROWS
from ..sheetspec.model import CellKind, Sheet, Workbook
from ..sheetspec.validate import used_range
from .ast import CellRef, Expr, Name, RangeArea, walk
from .parser import parse_formula
from ..errors import FormulaSyntaxError

Node = tuple[str, CellAddress]

RANGE_EXPANSION_CAP = 4096


@dataclass
class DepGraph:
    nodes: set[Node] = field(default_factory=set)
    # referenced cell -> formula cells that read it
    dependents: dict[Node, set[Node]] = field(default_factory=dict)
    # formula cell -> cells it reads
    references: dict[Node, set[Node]] = field(default_factory=dict)
    cycle_nodes: set[Node] = field(default_factory=set)
    # formula cells whose source failed to parse (evaluate to #NAME?)
    unparseable: set[Node] = field(default_factory=set)
    asts: dict[Node, Expr] = field(default_factory=dict)


def resolve_sheet(wb: Workbook, host: Sheet, qualifier: str | None) -> Sheet | None:
    if qualifier is None:
        return host
    return wb.find_sheet(qualifier)


def resolve_named_range(
    wb: Workbook, host: Sheet, name: str
) -> tuple[Sheet, RangeRef | ColumnSpan | RowSpan] | None:
    """Resolve a bare name to (defining sheet, parsed area).

    The host sheet's names win; otherwise the first defining sheet in
    document order. Returns None if nothing resolves or the stored ref
    does not parse.
    """
    from ..sheetspec.addresses import parse_area

    lowered = name.lower()
    candidates = [host] + [s for s in wb.sheets if s is not host]
    for sheet in candidates:
        for nr in sheet.named_ranges:
            if nr.name.lower() == lowered:
                try:
                    return sheet, parse_area(nr.ref)
                except ValueError:
                    return None
    return None


def clip_area(sheet: Sheet, area: RangeRef | ColumnSpan | RowSpan) -> RangeRef | None:
    """Turn an area into a bounded range, clipping full spans to used range.

    Returns None for spans over an empty sheet or fully out-of-bounds
    ranges (those evaluate to an empty range / #REF! respectively at the
    caller's discretion).
    """
    if isinstance(area, RangeRef):
        if area.end.row > MAX_ROWS or area.end.col > MAX_COLS:
            return None
        return area
    bounds = used_range(sheet)
    if bounds is None:
        return None
    min_row, max_row, min_col, max_col = bounds
    if isinstance(area, ColumnSpan):
        return RangeRef(
            CellAddress(min_row, area.first), CellAddress(max_row, area.last)
        )
    return RangeRef(CellAddress(area.first, min_col), CellAddress(area.last, max_col))


def _expand_area(sheet: Sheet, area: RangeRef | ColumnSpan | RowSpan) -> list[Node]:
    clipped = clip_area(sheet, area)
    if clipped is None:
        return []
    if clipped.n_rows * clipped.n_cols > RANGE_EXPANSION_CAP:
        return [
            (sheet.name, c.address) for c in sheet.cells if clipped.contains(c.address)
        ]
    return [(sheet.name, addr) for addr in clipped.cells()]


def referenced_nodes(wb: Workbook, host: Sheet, expr: Expr) -> list[Node]:
    """Concrete cells the expression reads. Unresolvable refs contribute none."""
    out: list[Node] = []
    for node in walk(expr):
        if isinstance(node, CellRef):
            sheet = resolve_sheet(wb, host, node.sheet)
            if sheet is not None and node.address.in_bounds():
                out.append((sheet.name, node.address))
        elif isinstance(node, RangeArea):
            sheet = resolve_sheet(wb, host, node.sheet)
            if sheet is not None:
                out.extend(_expand_area(sheet, node.area))
        elif isinstance(node, Name):
            resolved = resolve_named_range(wb, host, node.name)
            if resolved is not None:
                target_sheet, area = resolved
                out.extend(_expand_area(target_sheet, area))
    return out


def build_dependency_graph(wb: Workbook) -> DepGraph:
    """Parse all formulas and assemble the reference graph with cycle set."""
    graph = DepGraph()
    formula_nodes: list[Node] = []
    for sheet in wb.sheets:
        for cell in sheet.cells:
            if cell.kind != CellKind.FORMULA:
                continue
            node = (sheet.name, cell.address)
            graph.nodes.add(node)
            formula_nodes.append(node)
            try:
                ast = parse_formula(cell.formula)
            except FormulaSyntaxError:
                graph.unparseable.add(node)
                graph.references[node] = set()
                continue
            graph.asts[node] = ast
            refs = set(referenced_nodes(wb, sheet, ast))
            graph.references[node] = refs
            for ref in refs:
                graph.nodes.add(ref)
                graph.dependents.setdefault(ref, set()).add(node)

    graph.cycle_nodes = _find_cycle_nodes(graph, formula_nodes)
    return graph


def _find_cycle_nodes(graph: DepGraph, formula_nodes: list[Node]) -> set[Node]:
    """Nodes on any reference cycle: members of SCCs of size > 1 or self-loops.

    Iterative Tarjan over the formula-cell subgraph (only formula cells can
    have outgoing reference edges).
    """
    formula_set = set(formula_nodes)
    index_of: dict[Node, int] = {}
    lowlink: dict[Node, int] = {}
    on_stack: set[Node] = set()
    stack: list[Node] = []
    counter = 0
    cycles: set[Node] = set()

    def neighbors(node: Node) -> list[Node]:
        return [n for n in graph.references.get(node, ()) if n in formula_set]

    for root in formula_nodes:
        if root in index_of:
            continue
        work: list[tuple[Node, int]] = [(root, 0)]
        while work:
            node, child_idx = work.pop()
            if child_idx == 0:
                index_of[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            recurse = False
            succs = neighbors(node)
            for i in range(child_idx, len(succs)):
                succ = succs[i]
                if succ not in index_of:
                    work.append((node, i + 1))
                    work.append((succ, 0))
                    recurse = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index_of[succ])
            if recurse:
                continue
            if lowlink[node] == index_of[node]:
                component: list[Node] = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1:
                    cycles.update(component)
                elif node in graph.references.get(node, ()):  # self-loop
                    cycles.add(node)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
    return cycles


def topological_order(graph: DepGraph, wb: Workbook) -> list[Node]:
    """Formula cells in dependency order, cycle members excluded.

    Deterministic: ties broken by (sheet order in the workbook, row, col),
    independent of the document's cell array order.
    """
    sheet_rank = {s.name: i for i, s in enumerate(wb.sheets)}

    def sort_key(node: Node) -> tuple[int, int, int]:
        return (sheet_rank[node[0]], node[1].row, node[1].col)

    pending = {
        node
        for node in graph.references
        if node not in graph.cycle_nodes
    }
    # Count only dependencies that are themselves formula cells still pending.
    indegree: dict[Node, int] = {}
    for node in pending:
        indegree[node] = sum(1 for ref in graph.references[node] if ref in pending)
    ready = sorted((n for n, d in indegree.items() if d == 0), key=sort_key)
    order: list[Node] = []
    heap = [(sort_key(n), n) for n in ready]
    heapq.heapify(heap)
    while heap:
        _, node = heapq.heappop(heap)
        order.append(node)
        for dependent in sorted(graph.dependents.get(node, ()), key=sort_key):
            if dependent in indegree and dependent not in graph.cycle_nodes:
                indegree[dependent] -= 1
                if indegree[dependent] == 0:
                    heapq.heappush(heap, (sort_key(dependent), dependent))
    return order
