"""Instance generators for the benchmark domains.

Every generator is a pure function of its :class:`BenchSpec`; randomness only
comes from ``random.Random(spec.seed)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .domains import DOMAINS

DOMAIN_NAMES = ("tablemover", "maze", "boxpushing", "workshop", "maze-scaling")


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class BenchSpec:
    """Size parameters; each domain reads the fields it needs.

    tablemover: agents, rooms, blocks, sides
    maze: agents, width, height (connection kinds drawn from the seed)
    maze-scaling: agents (fixed 3x3 grid with a single boat/bridge path)
    boxpushing: agents, width, height, boxes (tuple of sizes 1..3)
    workshop: agents, rooms, pallets, doors
    """

    domain: str
    agents: int = 2
    width: int = 2
    height: int = 2
    rooms: int = 2
    blocks: int = 1
    sides: int = 2
    boxes: tuple[int, ...] = (1,)
    pallets: int = 1
    doors: int = 1
    seed: int = 0
    extra: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def label(self) -> str:
        d = self.domain
        if d == "tablemover":
            return f"tablemover-a{self.agents}-r{self.rooms}-b{self.blocks}-s{self.seed}"
        if d == "maze":
            return f"maze-a{self.agents}-{self.width}x{self.height}-s{self.seed}"
        if d == "maze-scaling":
            return f"maze-scaling-a{self.agents}"
        if d == "boxpushing":
            sizes = "".join(map(str, self.boxes))
            return f"boxpushing-a{self.agents}-{self.width}x{self.height}-b{sizes}-s{self.seed}"
        return f"workshop-a{self.agents}-r{self.rooms}-p{self.pallets}-s{self.seed}"

    def validate(self) -> None:
        if self.domain not in DOMAIN_NAMES:
            raise SpecError(f"unknown domain {self.domain!r}; choose from {', '.join(DOMAIN_NAMES)}")
        if self.agents < 1:
            raise SpecError("need at least one agent")
        d = self.domain
        if d == "tablemover":
            if self.agents < 2 or self.sides < 2 or self.rooms < 2 or self.blocks < 1:
                raise SpecError("tablemover needs >= 2 agents, >= 2 sides, >= 2 rooms, >= 1 block")
        elif d == "maze":
            if self.width < 1 or self.height < 1 or self.width * self.height < 2:
                raise SpecError("maze needs at least two cells")
        elif d == "boxpushing":
            if self.width * self.height < 2:
                raise SpecError("boxpushing needs at least two cells")
            if not self.boxes or any(b not in (1, 2, 3) for b in self.boxes):
                raise SpecError("box sizes must be 1, 2 or 3")
        elif d == "workshop":
            if self.agents < 2:
                raise SpecError("workshop needs two agents (switch and key, lift and examine)")
            if self.rooms < 2 or self.pallets < 1 or not (1 <= self.doors <= self.rooms - 1):
                raise SpecError("workshop needs >= 2 rooms, >= 1 pallet and 1..rooms-1 doors")


def _problem(name: str, domain: str, objects: dict[str, list[str]], init: list[str], goal: list[str]) -> str:
    objs = "\n".join(f"    {' '.join(v)} - {t}" for t, v in objects.items() if v)
    ini = "\n".join(f"    {a}" for a in init)
    gl = " ".join(goal)
    return f"(define (problem {name})\n  (:domain {domain})\n  (:objects\n{objs})\n  (:init\n{ini})\n  (:goal (and {gl}))\n)\n"


def tablemover(spec: BenchSpec) -> str:
    rng = random.Random(spec.seed)
    agents = [f"a{i}" for i in range(1, spec.agents + 1)]
    rooms = [f"r{i}" for i in range(1, spec.rooms + 1)]
    blocks = [f"b{i}" for i in range(1, spec.blocks + 1)]
    sides = [f"s{i}" for i in range(1, spec.sides + 1)]
    init = []
    # rooms on a corridor
    for x, y in zip(rooms, rooms[1:]):
        init += [f"(connected {x} {y})", f"(connected {y} {x})"]
    for a in agents:
        init += [f"(inroom {a} {rooms[0] if spec.seed == 0 else rng.choice(rooms)})", f"(handempty {a})"]
    init.append(f"(inroom Table {rooms[0] if spec.seed == 0 else rng.choice(rooms)})")
    init += [f"(down {s})" for s in sides]
    goal = []
    for b in blocks:
        start = rooms[0] if spec.seed == 0 else rng.choice(rooms)
        target = rooms[-1] if spec.seed == 0 else rng.choice([r for r in rooms if r != start])
        init += [f"(inroom {b} {start})", f"(on-floor {b})"]
        goal.append(f"(inroom {b} {target})")
    goal.append("(not (dropped))")
    objects = {"agent": agents, "block": blocks, "room": rooms, "side": sides}
    return _problem(spec.label, "tablemover", objects, init, goal)


def tablemover_example() -> tuple[str, str]:
    """The two-agent, one-block, two-room instance used throughout the docs."""
    return DOMAINS["tablemover"], tablemover(BenchSpec("tablemover", agents=2, rooms=2, blocks=1, sides=2))


def _grid(width: int, height: int) -> tuple[list[str], list[tuple[str, str]]]:
    cells = [f"c{x}{y}" if width < 10 and height < 10 else f"c{x}-{y}" for y in range(height) for x in range(width)]
    name = {(x, y): cells[y * width + x] for y in range(height) for x in range(width)}
    edges = []
    for y in range(height):
        for x in range(width):
            if x + 1 < width:
                edges.append((name[x, y], name[x + 1, y]))
            if y + 1 < height:
                edges.append((name[x, y], name[x, y + 1]))
    return cells, edges


def maze(spec: BenchSpec) -> str:
    """Random grid maze; every edge is a door, a bridge or a boat.

    Agents start in the first cell and head for random targets. Boats need a
    partner, so they are only drawn when there are at least two agents.
    """
    rng = random.Random(spec.seed)
    cells, edges = _grid(spec.width, spec.height)
    agents = [f"a{i}" for i in range(1, spec.agents + 1)]
    kinds = ["door", "bridge", "boat"] if spec.agents >= 2 else ["door", "bridge"]
    doors, bridges, boats, init = [], [], [], []
    for x, y in edges:
        k = rng.choice(kinds)
        if k == "door":
            d = f"d{len(doors) + 1}"
            doors.append(d)
            init += [f"(door-link {d} {x} {y})", f"(door-link {d} {y} {x})"]
        elif k == "bridge":
            b = f"br{len(bridges) + 1}"
            bridges.append(b)
            init += [f"(bridge-link {b} {x} {y})", f"(bridge-link {b} {y} {x})", f"(intact {b})"]
        else:
            b = f"bt{len(boats) + 1}"
            boats.append(b)
            init += [f"(boat-link {b} {x} {y})", f"(boat-link {b} {y} {x})"]
    goal = []
    for a in agents:
        init.append(f"(at {a} {cells[0]})")
        goal.append(f"(at {a} {rng.choice(cells[1:])})")
    objects = {"agent": agents, "location": cells, "door": doors, "bridge": bridges, "boat": boats}
    return _problem(spec.label, "maze", objects, init, goal)


def maze_scaling(spec: BenchSpec) -> str:
    """3x3 grid, shared start and goal, one directed path alternating boats and bridges.

    The path c00 -> c10 -> c20 -> c21 -> c22 has four links: boat, bridge,
    boat, bridge. Each agent therefore has exactly four ground actions. With a
    single agent no plan exists (boats need two rowers).
    """
    cells, _ = _grid(3, 3)
    agents = [f"a{i}" for i in range(1, spec.agents + 1)]
    path = ["c00", "c10", "c20", "c21", "c22"]
    boats, bridges, init = [], [], []
    for k, (x, y) in enumerate(zip(path, path[1:])):
        if k % 2 == 0:
            b = f"bt{len(boats) + 1}"
            boats.append(b)
            init.append(f"(boat-link {b} {x} {y})")
        else:
            b = f"br{len(bridges) + 1}"
            bridges.append(b)
            init += [f"(bridge-link {b} {x} {y})", f"(intact {b})"]
    init += [f"(at {a} c00)" for a in agents]
    goal = [f"(at {a} c22)" for a in agents]
    objects = {"agent": agents, "location": cells, "bridge": bridges, "boat": boats}
    return _problem(spec.label, "maze", objects, init, goal)


def boxpushing(spec: BenchSpec) -> str:
    rng = random.Random(spec.seed)
    cells, edges = _grid(spec.width, spec.height)
    agents = [f"a{i}" for i in range(1, spec.agents + 1)]
    boxes = [f"box{i}" for i in range(1, len(spec.boxes) + 1)]
    init = []
    for x, y in edges:
        init += [f"(adj {x} {y})", f"(adj {y} {x})"]
    for a in agents:
        init.append(f"(at {a} {cells[0] if spec.seed == 0 else rng.choice(cells)})")
    goal = []
    size_name = {1: "small", 2: "medium", 3: "large"}
    for b, size in zip(boxes, spec.boxes):
        start = cells[0] if spec.seed == 0 else rng.choice(cells)
        target = cells[-1] if spec.seed == 0 else rng.choice([c for c in cells if c != start])
        init += [f"(box-at {b} {start})", f"({size_name[size]} {b})"]
        goal.append(f"(box-at {b} {target})")
    objects = {"agent": agents, "cell": cells, "box": boxes}
    return _problem(spec.label, "boxpushing", objects, init, goal)


def workshop(spec: BenchSpec) -> str:
    """Rooms on a corridor; the first ``doors`` links are locked, the rest open.

    Switch and keyhole of a locked door are both in the room before it, so two
    agents must be there at once. Keys and the forklift start in the first
    room; pallets sit in rooms past the first door.
    """
    rng = random.Random(spec.seed)
    agents = [f"w{i}" for i in range(1, spec.agents + 1)]
    rooms = [f"l{i}" for i in range(1, spec.rooms + 1)]
    doors = [f"d{i}" for i in range(1, spec.rooms)]
    keys = [f"k{i}" for i in range(1, spec.doors + 1)]
    pallets = [f"p{i}" for i in range(1, spec.pallets + 1)]
    init = []
    for i, d in enumerate(doors):
        x, y = rooms[i], rooms[i + 1]
        init += [f"(link {x} {y} {d})", f"(link {y} {x} {d})"]
        if i < spec.doors:
            k = keys[i]
            init += [f"(switch-at {d} {x})", f"(keyhole-at {d} {x})", f"(key-for {k} {d})", f"(key-at {k} {rooms[0]})"]
        else:
            init.append(f"(open {d})")
    for a in agents:
        init += [f"(at {a} {rooms[0]})", f"(on-foot {a})"]
    init += [f"(forklift-at f1 {rooms[0]})", "(empty f1)"]
    goal = []
    for p in pallets:
        room = rooms[-1] if spec.seed == 0 else rng.choice(rooms[1:])
        init.append(f"(pallet-at {p} {room})")
        goal.append(f"(inventoried {p})")
    objects = {"agent": agents, "location": rooms, "door": doors, "key": keys, "forklift": ["f1"], "pallet": pallets}
    return _problem(spec.label, "workshop", objects, init, goal)


_GENERATORS = {
    "tablemover": tablemover,
    "maze": maze,
    "maze-scaling": maze_scaling,
    "boxpushing": boxpushing,
    "workshop": workshop,
}


def generate(spec: BenchSpec) -> tuple[str, str]:
    """(domain text, problem text) for ``spec``."""
    spec.validate()
    return DOMAINS[spec.domain], _GENERATORS[spec.domain](spec)


def desk_suite() -> list[BenchSpec]:
    """Small instances (<= 3 agents, <= 3x3 grids) used by the property checks."""
    return [
        BenchSpec("tablemover", agents=2, rooms=2, blocks=1),
        BenchSpec("tablemover", agents=2, rooms=3, blocks=1, seed=3),
        BenchSpec("maze", agents=2, width=2, height=2, seed=1),
        BenchSpec("maze", agents=2, width=3, height=2, seed=2),
        BenchSpec("maze", agents=3, width=3, height=3, seed=1),
        BenchSpec("maze", agents=3, width=3, height=2, seed=3),
        BenchSpec("maze-scaling", agents=2),
        BenchSpec("boxpushing", agents=2, width=2, height=2, boxes=(1, 2)),
        BenchSpec("boxpushing", agents=3, width=3, height=1, boxes=(3,)),
        BenchSpec("boxpushing", agents=2, width=3, height=2, boxes=(2,), seed=4),
        BenchSpec("workshop", agents=2, rooms=2, pallets=1, doors=1),
        BenchSpec("workshop", agents=3, rooms=3, pallets=2, doors=1, seed=1),
    ]


def with_seed(spec: BenchSpec, seed: int) -> BenchSpec:
    return replace(spec, seed=seed)
