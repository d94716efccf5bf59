"""Finite posets: loader, brute-force way-below oracle and Scott opens.

Poset files are line oriented::

    poset two_chain 2
    cover 0 1

The first line names the poset and its carrier size; each ``cover i j``
line states i ⪯ j. Blank lines and ``#`` comments are ignored. The order
is the reflexive-transitive closure of the covers; cycles are rejected.
"""

import logging
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

import networkx as nx

logger = logging.getLogger(__name__)

ORACLE_CAP = 12
SCOTT_CAP = 5


class CarrierTooLarge(ValueError):
    """Raised when an exhaustive subset enumeration would exceed its cap."""

    pass


class PosetFormatError(ValueError):
    """Raised when a poset file is malformed or its covers form a cycle."""

    pass


@dataclass(frozen=True)
class FinitePoset:
    """A partial order on {0, …, size−1}.

    Attributes:
        name: Label from the file header.
        size: Carrier size.
        matrix: matrix[i][j] is True iff i ⪯ j.
    """

    name: str
    size: int
    matrix: tuple[tuple[bool, ...], ...]

    @classmethod
    def from_covers(
        cls, name: str, size: int, covers: list[tuple[int, int]]
    ) -> "FinitePoset":
        """Close the cover pairs reflexively and transitively.

        Raises:
            PosetFormatError: If an index is out of range or the covers cycle.
        """
        graph = nx.DiGraph()
        graph.add_nodes_from(range(size))
        for i, j in covers:
            if not (0 <= i < size and 0 <= j < size):
                raise PosetFormatError(f"cover {i} {j} outside carrier of size {size}")
            if i != j:
                graph.add_edge(i, j)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise PosetFormatError(f"covers form a cycle: {cycle}")
        closure = nx.transitive_closure_dag(graph)
        matrix = tuple(
            tuple(i == j or closure.has_edge(i, j) for j in range(size))
            for i in range(size)
        )
        return cls(name, size, matrix)

    def leq(self, a: int, b: int) -> bool:
        return self.matrix[a][b]

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """Bitmask of ↑x for each x."""
        return tuple(
            sum(1 << y for y in range(self.size) if self.matrix[x][y])
            for x in range(self.size)
        )

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        """Bitmask of ↓x for each x."""
        return tuple(
            sum(1 << y for y in range(self.size) if self.matrix[y][x])
            for x in range(self.size)
        )

    @cached_property
    def directed_subsets(self) -> tuple[tuple[int, int], ...]:
        """(subset mask, supremum) for every non-empty directed subset.

        A finite subset is directed exactly when it has a greatest element,
        which is then its supremum.
        """
        found = []
        for mask in range(1, 1 << self.size):
            for top in range(self.size):
                if mask >> top & 1 and mask & ~self.down_masks[top] == 0:
                    found.append((mask, top))
                    break
        return tuple(found)


def parse_poset(text: str) -> FinitePoset:
    """Parse the poset file format.

    Args:
        text: File contents.

    Returns:
        FinitePoset: The closed order.

    Raises:
        PosetFormatError: On a malformed header, line or cyclic covers.
    """
    lines = [
        line.split("#", 1)[0].strip() for line in text.splitlines()
    ]
    lines = [line for line in lines if line]
    if not lines:
        raise PosetFormatError("empty poset file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "poset":
        raise PosetFormatError(f"expected 'poset <name> <size>', got {lines[0]!r}")
    try:
        size = int(header[2])
    except ValueError:
        raise PosetFormatError(f"size must be an integer, got {header[2]!r}") from None
    if size <= 0:
        raise PosetFormatError("size must be positive")
    covers = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "cover":
            raise PosetFormatError(f"expected 'cover <i> <j>', got {line!r}")
        try:
            covers.append((int(parts[1]), int(parts[2])))
        except ValueError:
            raise PosetFormatError(f"cover indices must be integers: {line!r}") from None
    return FinitePoset.from_covers(header[1], size, covers)


def load_poset(path: Path) -> FinitePoset:
    """Read and parse a poset file."""
    return parse_poset(path.read_text())


def random_poset(size: int, rng: random.Random, density: float = 0.3) -> FinitePoset:
    """Random poset from forward edges of a shuffled linear extension."""
    order = list(range(size))
    rng.shuffle(order)
    covers = [
        (order[i], order[j])
        for i, j in combinations(range(size), 2)
        if rng.random() < density
    ]
    return FinitePoset.from_covers(f"random{size}", size, covers)


def _check_carrier(p: FinitePoset, cap: int) -> None:
    if p.size > cap:
        raise CarrierTooLarge(f"carrier {p.size} exceeds the cap of {cap}")


def way_below_oracle(p: FinitePoset, a: int, b: int, cap: int = ORACLE_CAP) -> bool:
    """Decide a ≪ b by enumerating directed subsets.

    True iff every directed D with ⊔D ⪰ b meets ↑a.

    Raises:
        CarrierTooLarge: If the carrier exceeds ``cap``.
    """
    _check_carrier(p, cap)
    up_a = p.up_masks[a]
    for mask, top in p.directed_subsets:
        if p.matrix[b][top] and mask & up_a == 0:
            return False
    return True


def is_compact(p: FinitePoset, a: int) -> bool:
    """a ≪ a. Always true in a finite poset; infinite strings of the Cantor
    domain are the standard elements for which it fails."""
    return way_below_oracle(p, a, a)


def upper_sets(p: FinitePoset) -> list[frozenset[int]]:
    """All upward-closed subsets, ordered by size then members."""
    found = []
    for mask in range(1 << p.size):
        if all(p.up_masks[x] & ~mask == 0 for x in range(p.size) if mask >> x & 1):
            found.append(frozenset(x for x in range(p.size) if mask >> x & 1))
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def scott_opens(p: FinitePoset, cap: int = SCOTT_CAP) -> list[frozenset[int]]:
    """Upper sets that are inaccessible by directed suprema.

    Raises:
        CarrierTooLarge: If the carrier exceeds ``cap``.
    """
    _check_carrier(p, cap)
    opens = []
    for candidate in upper_sets(p):
        mask = sum(1 << x for x in candidate)
        if all(
            mask & subset
            for subset, top in p.directed_subsets
            if mask >> top & 1
        ):
            opens.append(candidate)
    logger.debug("%s: %d Scott opens", p.name, len(opens))
    return opens


def separates_points(p: FinitePoset, opens: list[frozenset[int]]) -> list[tuple[int, int]]:
    """Pairs a ≠ b that no open tells apart (empty for a T₀ topology)."""
    return [
        (a, b)
        for a, b in combinations(range(p.size), 2)
        if not any((a in o) != (b in o) for o in opens)
    ]


@dataclass
class FiniteConnectivity:
    connected: bool
    witness: tuple[int, int, int] | None = None


def check_conditionally_connected(p: FinitePoset) -> FiniteConnectivity:
    """Exhaustive search for incomparable x, y below a common z."""
    for z in range(p.size):
        lower = [x for x in range(p.size) if p.leq(x, z)]
        for x, y in combinations(lower, 2):
            if not p.leq(x, y) and not p.leq(y, x):
                return FiniteConnectivity(False, (x, y, z))
    return FiniteConnectivity(True)
