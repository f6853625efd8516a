"""Deterministic schedule simulation of a task graph on a 2D-mesh NoC.

Model
-----
Tiles form a cols x rows grid; each placed core owns one tile.  Values
travel as messages of `flits_per_value` flits (default: one flit per 32
bits of field width) along the XY dimension-order route: all column
steps first, then all row steps.  Every directed link carries at most
one flit per cycle; a flit needs `hop_cycles` to cross a link, and flits
of one message stay in order.  Link-cycle conflicts are resolved by
booking the earliest free cycle, in simulation order.

Scheduling is greedy list scheduling: when a core of the right role is
idle, the ready task with the longest remaining cost-weighted path to a
sink is dispatched to the idle core closest (sum of Manhattan distances)
to its operand producers.  Operand messages launch at dispatch time; the
task starts once all operands have arrived and runs without preemption.

Input (XFER) values are preloaded into every core's local store before
cycle 0, so only computed values cross the network.  Dispatch and other
control traffic is not charged.  The run ends when both coordinates of
the result pair have reached the IO core; that arrival cycle is the
makespan.  Total flit-hops (one flit crossing one link) serve as the
traffic/energy proxy.
"""

from __future__ import annotations

import enum
import heapq
import math
import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import Optional

from .errors import MissingCoreRole, OutOfMesh, TooManyCores
from .fields import OpKind
from .procmodel import CostModel, TaskGraph

Tile = tuple[int, int]


@dataclass(frozen=True)
class MeshConfig:
    cols: int = 4
    rows: int = 3
    hop_cycles: int = 1
    flits_per_value: Optional[int] = None  # None: ceil(field_bits / 32)

    def __post_init__(self):
        if self.cols < 1 or self.rows < 1:
            raise ValueError("mesh needs at least one column and one row")
        if self.hop_cycles < 1:
            raise ValueError("hop_cycles must be at least 1")
        if self.flits_per_value is not None and self.flits_per_value < 1:
            raise ValueError("flits_per_value must be at least 1")

    @property
    def n_tiles(self) -> int:
        return self.cols * self.rows

    def tiles(self) -> list[Tile]:
        return [(c, r) for c in range(self.cols) for r in range(self.rows)]

    def contains(self, tile: Tile) -> bool:
        c, r = tile
        return 0 <= c < self.cols and 0 <= r < self.rows


class CoreRole(enum.Enum):
    CTRL = "ctrl"
    ADD_UNIT = "add"
    MUL_UNIT = "mul"
    SQR_UNIT = "sqr"
    INV_UNIT = "inv"
    IO = "io"


DEFAULT_ROLE_COUNTS = {
    CoreRole.CTRL: 1,
    CoreRole.ADD_UNIT: 3,
    CoreRole.MUL_UNIT: 4,
    CoreRole.SQR_UNIT: 2,
    CoreRole.INV_UNIT: 1,
    CoreRole.IO: 1,
}

_KIND_ROLE = {
    OpKind.ADD: CoreRole.ADD_UNIT,
    OpKind.SUB: CoreRole.ADD_UNIT,
    OpKind.MUL: CoreRole.MUL_UNIT,
    OpKind.SQR: CoreRole.SQR_UNIT,
    OpKind.INV: CoreRole.INV_UNIT,
}

_CORE_NAME = re.compile(r"^(ctrl|add|mul|sqr|inv|io)(\d+)$")


def role_for_kind(kind: OpKind) -> CoreRole:
    """The core role that executes a task kind (XFER runs nowhere)."""
    return _KIND_ROLE[kind]


def manhattan(a: Tile, b: Tile) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def xy_route(mesh: MeshConfig, src: Tile, dst: Tile) -> list[tuple[Tile, Tile]]:
    """Directed links of the XY route: column steps first, then rows."""
    for tile in (src, dst):
        if not mesh.contains(tile):
            raise OutOfMesh(f"tile {tile} lies outside the "
                            f"{mesh.cols}x{mesh.rows} mesh")
    route = []
    c, r = src
    while c != dst[0]:
        step = 1 if dst[0] > c else -1
        route.append(((c, r), (c + step, r)))
        c += step
    while r != dst[1]:
        step = 1 if dst[1] > r else -1
        route.append(((c, r), (c, r + step)))
        r += step
    return route


def centrality(mesh: MeshConfig) -> dict[Tile, int]:
    """Sum of Manhattan distances from each tile to every tile; lower
    means more central."""
    tiles = mesh.tiles()
    return {t: sum(manhattan(t, u) for u in tiles) for t in tiles}


class Placement:
    """Assignment of named cores (role + instance index) to tiles."""

    def __init__(self, entries: dict[str, Tile]):
        self.entries = dict(entries)
        self._by_role: dict[CoreRole, list[tuple[int, str, Tile]]] = {
            role: [] for role in CoreRole}
        for name, tile in self.entries.items():
            m = _CORE_NAME.match(name)
            if m is None:
                raise ValueError(f"core name {name!r} is not <role><index>")
            role = CoreRole(m.group(1))
            self._by_role[role].append((int(m.group(2)), name, tile))
        for role in CoreRole:
            self._by_role[role].sort()

    def validate(self, mesh: MeshConfig) -> None:
        if len(self.entries) > mesh.n_tiles:
            raise TooManyCores(
                f"{len(self.entries)} cores will not fit on "
                f"{mesh.n_tiles} tiles")
        seen: dict[Tile, str] = {}
        for name, tile in self.entries.items():
            if not mesh.contains(tile):
                raise OutOfMesh(f"core {name} sits at {tile}, outside the "
                                f"{mesh.cols}x{mesh.rows} mesh")
            if tile in seen:
                raise ValueError(
                    f"cores {seen[tile]} and {name} share tile {tile}")
            seen[tile] = name

    def cores_of_role(self, role: CoreRole) -> list[tuple[str, Tile]]:
        return [(name, tile) for _, name, tile in self._by_role[role]]

    def __eq__(self, other) -> bool:
        return isinstance(other, Placement) and self.entries == other.entries


def role_usage(G: TaskGraph) -> dict[CoreRole, int]:
    """Task count per role; IO is charged one unit per result value."""
    usage = {role: 0 for role in CoreRole}
    for t in G.tasks:
        if t.kind is not OpKind.XFER:
            usage[role_for_kind(t.kind)] += 1
    usage[CoreRole.IO] = len(set(G.result))
    return usage


_ROLE_ORDER = list(CoreRole)


def _build_placement(mesh: MeshConfig, role_counts: dict[CoreRole, int],
                     usage: dict[CoreRole, int],
                     tiles: list[Tile]) -> Placement:
    total = sum(role_counts.values())
    if total > mesh.n_tiles:
        raise TooManyCores(f"{total} cores will not fit on "
                           f"{mesh.n_tiles} tiles")
    roles = sorted(
        (r for r in role_counts if role_counts[r] > 0),
        key=lambda r: (-usage.get(r, 0), _ROLE_ORDER.index(r)))
    entries: dict[str, Tile] = {}
    pos = 0
    for role in roles:
        for i in range(role_counts[role]):
            entries[f"{role.value}{i}"] = tiles[pos]
            pos += 1
    return Placement(entries)


def default_placement(mesh: MeshConfig, role_counts: dict[CoreRole, int],
                      usage: dict[CoreRole, int]) -> Placement:
    """Busiest roles on the most central tiles."""
    cent = centrality(mesh)
    tiles = sorted(mesh.tiles(), key=lambda t: (cent[t], t))
    return _build_placement(mesh, role_counts, usage, tiles)


def corner_first_placement(mesh: MeshConfig, role_counts: dict[CoreRole, int],
                           usage: dict[CoreRole, int]) -> Placement:
    """Adversarial control: busiest roles pushed to the rim."""
    cent = centrality(mesh)
    tiles = sorted(mesh.tiles(), key=lambda t: (-cent[t], t))
    return _build_placement(mesh, role_counts, usage, tiles)


# ---------------------------------------------------------------------------
# simulation

@dataclass
class ScheduleEntry:
    task: int
    kind: str
    core: str
    start: int
    end: int


@dataclass
class MessageRecord:
    producer: int         # task whose value moves
    consumer: int         # receiving task, or -1 for result delivery
    src: Tile
    dst: Tile
    launch: int
    arrival: int


@dataclass
class SimReport:
    makespan_cycles: int
    sequential_baseline_cycles: int
    speedup: float
    total_flit_hops: int
    flits_per_value: int
    per_core_busy_cycles: dict[str, int]
    per_link_flits: dict[str, int]
    schedule: list[ScheduleEntry]
    messages: list[MessageRecord]
    mesh: MeshConfig
    placement: Placement

    def to_json_dict(self) -> dict:
        return {
            "makespan_cycles": self.makespan_cycles,
            "sequential_baseline_cycles": self.sequential_baseline_cycles,
            "speedup": self.speedup,
            "total_flit_hops": self.total_flit_hops,
            "flits_per_value": self.flits_per_value,
            "mesh": {"cols": self.mesh.cols, "rows": self.mesh.rows,
                     "hop_cycles": self.mesh.hop_cycles},
            "placement": {name: list(tile)
                          for name, tile in sorted(self.placement.entries.items())},
            "per_core_busy_cycles": dict(sorted(self.per_core_busy_cycles.items())),
            "per_link_flits": dict(sorted(self.per_link_flits.items())),
            "n_scheduled_tasks": len(self.schedule),
        }

    def schedule_rows(self) -> list[list]:
        rows = [["task", "kind", "core", "start_cycle", "end_cycle"]]
        for e in self.schedule:
            rows.append([e.task, e.kind, e.core, e.start, e.end])
        return rows


def sequential_baseline(G: TaskGraph, cm: CostModel) -> int:
    """Total cycles of a single core running every task back to back
    with no transfers: the serial reference for speedup."""
    G.validate()
    return sum(cm.cost(t.kind) for t in G.tasks)


def _link_name(link: tuple[Tile, Tile]) -> str:
    (c1, r1), (c2, r2) = link
    return f"{c1},{r1}->{c2},{r2}"


class _Simulation:
    def __init__(self, G: TaskGraph, cm: CostModel, mesh: MeshConfig,
                 placement: Placement):
        G.validate()
        placement.validate(mesh)
        self.G, self.cm, self.mesh, self.placement = G, cm, mesh, placement
        self.flits = (mesh.flits_per_value if mesh.flits_per_value is not None
                      else max(1, math.ceil(G.field_bits / 32)))
        needed = {role_for_kind(t.kind) for t in G.tasks
                  if t.kind is not OpKind.XFER}
        needed.add(CoreRole.IO)
        for role in sorted(needed, key=_ROLE_ORDER.index):
            if not placement.cores_of_role(role):
                raise MissingCoreRole(
                    f"graph needs a {role.name} core but the placement "
                    f"has none")
        self.io_tile = placement.cores_of_role(CoreRole.IO)[0][1]
        # link booking: sorted lists of occupied cycles per directed link
        self._booked: dict[tuple[Tile, Tile], list[int]] = {}
        self.per_link_flits: dict[str, int] = {}
        self.total_flit_hops = 0
        self.messages: list[MessageRecord] = []
        self.schedule: list[ScheduleEntry] = []

    # -- link booking -------------------------------------------------------

    def _book_cycle(self, link: tuple[Tile, Tile], lo: int) -> int:
        lst = self._booked.setdefault(link, [])
        idx = bisect_left(lst, lo)
        cycle = lo
        while idx < len(lst) and lst[idx] == cycle:
            idx += 1
            cycle += 1
        lst.insert(idx, cycle)
        name = _link_name(link)
        self.per_link_flits[name] = self.per_link_flits.get(name, 0) + 1
        self.total_flit_hops += 1
        return cycle

    def _send(self, src: Tile, dst: Tile, t0: int) -> int:
        """Book one value transfer; returns the arrival cycle."""
        route = xy_route(self.mesh, src, dst)
        if not route:
            return t0
        hop = self.mesh.hop_cycles
        arrival = t0
        last_entry: dict[tuple[Tile, Tile], int] = {}
        for _ in range(self.flits):
            t = t0
            for link in route:
                lo = max(t, last_entry.get(link, -1) + 1)
                entry = self._book_cycle(link, lo)
                last_entry[link] = entry
                t = entry + hop
            arrival = t
        return arrival

    # -- main loop ----------------------------------------------------------

    def run(self) -> SimReport:
        G, cm = self.G, self.cm
        arith = [t for t in G.tasks if t.kind is not OpKind.XFER]
        succ: dict[int, list[int]] = {t.id: [] for t in G.tasks}
        remaining: dict[int, int] = {}
        for t in arith:
            n = 0
            for o in sorted(set(t.operands)):
                succ[o].append(t.id)
                if G.tasks[o].kind is not OpKind.XFER:
                    n += 1
            remaining[t.id] = n
        # priority: longest remaining cost-weighted path to any sink
        prio: dict[int, int] = {}
        for t in reversed(arith):
            down = max((prio[s] for s in succ[t.id]), default=0)
            prio[t.id] = cm.cost(t.kind) + down

        cores_by_role: dict[CoreRole, list] = {role: [] for role in CoreRole}
        busy_cycles: dict[str, int] = {}
        for role in CoreRole:
            for idx, (name, tile) in enumerate(self.placement.cores_of_role(role)):
                cores_by_role[role].append((idx, name, tile))
                busy_cycles[name] = 0
        idle: dict[CoreRole, list] = {
            role: list(cores) for role, cores in cores_by_role.items()}

        ready: dict[CoreRole, list] = {role: [] for role in CoreRole}
        for t in arith:
            if remaining[t.id] == 0:
                heapq.heappush(ready[role_for_kind(t.kind)],
                               (-prio[t.id], t.id))

        loc: dict[int, Optional[Tile]] = {
            t.id: None for t in G.tasks if t.kind is OpKind.XFER}
        result_set = set(G.result)
        arrivals: dict[int, int] = {}
        for r in result_set:
            if G.tasks[r].kind is OpKind.XFER:
                arrivals[r] = 0  # inputs are preloaded everywhere, IO included

        events: list = []   # (time, seq, task_id, role, core)
        seq = 0

        def dispatch(now: int) -> None:
            nonlocal seq
            for role in CoreRole:
                queue = ready[role]
                free = idle[role]
                while queue and free:
                    _, tid = heapq.heappop(queue)
                    task = G.tasks[tid]
                    sources = [loc[o] for o in sorted(set(task.operands))]
                    best = min(free, key=lambda c: (
                        sum(manhattan(s, c[2]) for s in sources
                            if s is not None), c[0]))
                    free.remove(best)
                    start = now
                    for o in sorted(set(task.operands)):
                        src = loc[o]
                        if src is None or src == best[2]:
                            continue
                        arr = self._send(src, best[2], now)
                        self.messages.append(MessageRecord(
                            producer=o, consumer=tid, src=src, dst=best[2],
                            launch=now, arrival=arr))
                        start = max(start, arr)
                    end = start + cm.cost(task.kind)
                    busy_cycles[best[1]] += cm.cost(task.kind)
                    self.schedule.append(ScheduleEntry(
                        task=tid, kind=task.kind.value, core=best[1],
                        start=start, end=end))
                    heapq.heappush(events, (end, seq, tid, role, best))
                    seq += 1

        dispatch(0)
        while events:
            now = events[0][0]
            batch = []
            while events and events[0][0] == now:
                batch.append(heapq.heappop(events))
            for _, _, tid, role, core in batch:
                loc[tid] = core[2]
                idle[role].append(core)
                idle[role].sort()
                for s in succ[tid]:
                    remaining[s] -= 1
                    if remaining[s] == 0:
                        skind = G.tasks[s].kind
                        heapq.heappush(ready[role_for_kind(skind)],
                                       (-prio[s], s))
                if tid in result_set:
                    if core[2] == self.io_tile:
                        arrivals[tid] = now
                    else:
                        arr = self._send(core[2], self.io_tile, now)
                        self.messages.append(MessageRecord(
                            producer=tid, consumer=-1, src=core[2],
                            dst=self.io_tile, launch=now, arrival=arr))
                        arrivals[tid] = arr
            dispatch(now)

        makespan = max(arrivals.values()) if arrivals else 0
        baseline = sequential_baseline(G, cm)
        speedup = baseline / makespan if makespan > 0 else 1.0
        return SimReport(
            makespan_cycles=makespan,
            sequential_baseline_cycles=baseline,
            speedup=speedup,
            total_flit_hops=self.total_flit_hops,
            flits_per_value=self.flits,
            per_core_busy_cycles=busy_cycles,
            per_link_flits=self.per_link_flits,
            schedule=self.schedule,
            messages=self.messages,
            mesh=self.mesh,
            placement=self.placement,
        )


def simulate(G: TaskGraph, cm: CostModel, mesh: MeshConfig,
             placement: Placement) -> SimReport:
    """Run the deterministic schedule simulation; see the module doc."""
    return _Simulation(G, cm, mesh, placement).run()


def compare_placements(G: TaskGraph, cm: CostModel, mesh: MeshConfig,
                       placements: list[tuple[str, Placement]]
                       ) -> list[tuple[str, SimReport]]:
    """Simulate every named placement and rank by makespan, then
    traffic, then name."""
    if len(placements) < 2:
        raise ValueError("placement comparison needs at least two entries")
    names = [name for name, _ in placements]
    if len(set(names)) != len(names):
        raise ValueError("placement names must be unique")
    results = [(name, simulate(G, cm, mesh, pl)) for name, pl in placements]
    results.sort(key=lambda item: (item[1].makespan_cycles,
                                   item[1].total_flit_hops, item[0]))
    return results
