"""Property: replacing any referenced literal with an error value never
produces a non-error in dependents, except through IFERROR.

Formulas whose AST contains IFERROR may absorb the error, so the walk stops
there (no assertion either way); every other dependent reached through
non-absorbing cells must turn into an error.
"""

import json
import random
from collections import deque

from sheetarena.formulas import build_dependency_graph, evaluate_workbook
from sheetarena.formulas.ast import Call, walk
from sheetarena.formulas.values import ErrorValue
from sheetarena.sheetspec import parse_workbook
from test_formula_oracle import build_document, random_workbook


def test_error_monotonicity_randomized():
    rng = random.Random(5150)
    mutations_checked = 0
    asserts_fired = 0
    for _ in range(600):
        sheets, cells = random_workbook(rng)
        literals = [k for k, spec in cells.items() if spec[0] == "num"]
        if not literals:
            continue
        target = rng.choice(literals)

        mutated = dict(cells)
        mutated[target] = ("bin", "/", ("lit", 1.0), ("lit", 0.0))  # rendered =(1/0)
        doc = build_document(sheets, mutated, rng)
        wb = parse_workbook(json.dumps(doc).encode())
        graph = build_dependency_graph(wb)
        grid = evaluate_workbook(wb, graph)

        # Cells that can absorb errors: any IFERROR call in the AST.
        absorbing = {
            node
            for node, ast in graph.asts.items()
            if any(isinstance(n, Call) and n.name == "IFERROR" for n in walk(ast))
        }

        from sheetarena.sheetspec import CellAddress

        target_node = (target[0], CellAddress(target[1], target[2]))
        if target_node not in graph.dependents:
            continue  # nothing references the literal; nothing to check
        mutations_checked += 1

        queue = deque(graph.dependents.get(target_node, ()))
        seen = set()
        while queue:
            node = queue.popleft()
            if node in seen:
                continue
            seen.add(node)
            if node in absorbing:
                continue  # IFERROR may stop the propagation here
            value = grid.values.get(node)
            assert isinstance(value, ErrorValue), (
                f"dependent {node} of error cell is {value!r}"
            )
            asserts_fired += 1
            queue.extend(graph.dependents.get(node, ()))
    assert mutations_checked > 100  # the property was actually exercised
    assert asserts_fired > 200
