"""Fixed-topology feed-forward baselines (fully / partially connected).

These controllers share the tissue's activation-function family and
input plane but have no regulation: every neuron is always active, so
they exhibit the spatial crosstalk the tissue's decision neurons
suppress. Topology is fixed at creation; variation touches weights,
thresholds, and activation functions only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .behaviors import BehaviorId, Mode, repertoire
from .controller import PLANE_SIZE, InputPlane
from .errors import MalformedGenome, ModeMismatch
from .tissue import THRESHOLD_BOUND, THRESHOLD_FNS, WEIGHT_BOUND, _hex, _unhex

MAX_FAN_IN = 9  # partially connected nets: at most nine inputs per neuron
HIDDEN_MIN = 10
HIDDEN_MAX = 110
MAX_HIDDEN_LAYERS = 3


@dataclass(frozen=True, slots=True)
class NeuronGene:
    inputs: tuple[int, ...]  # indices into the previous layer
    weights: tuple[float, ...]
    theta1: float
    theta2: float
    fn: str


@dataclass(frozen=True, slots=True)
class FixedNetGenome:
    variant: str  # "fc" or "pc"
    mode: Mode
    layer_sizes: tuple[int, ...]  # input first, output (repertoire size) last
    neurons: tuple[NeuronGene, ...]  # hidden then output, layer by layer

    @property
    def hidden_count(self) -> int:
        return sum(self.layer_sizes[1:-1])


def validate_fixed_net(net: FixedNetGenome) -> None:
    if net.variant not in ("fc", "pc"):
        raise MalformedGenome(f"unknown fixed-net variant {net.variant!r}")
    mode = Mode(net.mode)
    sizes = net.layer_sizes
    if len(sizes) < 2 or sizes[0] != PLANE_SIZE or sizes[-1] != len(repertoire(mode)):
        raise MalformedGenome("layer_sizes must run from the 16-node plane to the repertoire")
    if any(s < 1 for s in sizes):
        raise MalformedGenome("empty layer")
    if not HIDDEN_MIN <= net.hidden_count <= HIDDEN_MAX:
        raise MalformedGenome(
            f"hidden neuron count {net.hidden_count} outside [{HIDDEN_MIN}, {HIDDEN_MAX}]")
    if len(net.neurons) != sum(sizes[1:]):
        raise MalformedGenome("neuron list does not match layer_sizes")
    i = 0
    for prev, size in zip(sizes, sizes[1:]):
        for _ in range(size):
            n = net.neurons[i]
            i += 1
            if len(n.inputs) != len(n.weights) or not n.inputs:
                raise MalformedGenome("neuron inputs/weights mismatch")
            if len(set(n.inputs)) != len(n.inputs):
                raise MalformedGenome("duplicate input connection")
            if any(not 0 <= j < prev for j in n.inputs):
                raise MalformedGenome("connection index out of range")
            if net.variant == "fc" and len(n.inputs) != prev:
                raise MalformedGenome("fc neuron must connect to the whole previous layer")
            if net.variant == "pc" and len(n.inputs) > MAX_FAN_IN:
                raise MalformedGenome(f"pc neuron exceeds fan-in {MAX_FAN_IN}")
            if any(abs(w) > WEIGHT_BOUND for w in n.weights):
                raise MalformedGenome("weight out of bounds")
            if abs(n.theta1) > THRESHOLD_BOUND or abs(n.theta2) > THRESHOLD_BOUND:
                raise MalformedGenome("threshold out of bounds")
            if n.fn not in THRESHOLD_FNS:
                raise MalformedGenome(f"unknown threshold function {n.fn!r}")


def _draw_neuron(rng: np.random.Generator, prev: int, variant: str) -> NeuronGene:
    if variant == "fc":
        inputs = tuple(range(prev))
    else:
        k = int(rng.integers(1, min(MAX_FAN_IN, prev) + 1))
        inputs = tuple(sorted(int(v) for v in rng.choice(prev, k, replace=False)))
    return NeuronGene(
        inputs=inputs,
        weights=tuple(float(v) for v in rng.uniform(-WEIGHT_BOUND, WEIGHT_BOUND, len(inputs))),
        theta1=float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND)),
        theta2=float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND)),
        fn=THRESHOLD_FNS[int(rng.integers(0, 4))],
    )


def random_fixed_net(rng: np.random.Generator, variant: str,
                     mode: Mode = Mode.BASIS) -> FixedNetGenome:
    """Random net: 10..110 hidden neurons over 1..3 layers, output per behavior."""
    if variant not in ("fc", "pc"):
        raise MalformedGenome(f"unknown fixed-net variant {variant!r}")
    mode = Mode(mode)
    hidden = int(rng.integers(HIDDEN_MIN, HIDDEN_MAX + 1))
    n_layers = int(rng.integers(1, MAX_HIDDEN_LAYERS + 1))
    base, extra = divmod(hidden, n_layers)
    hidden_sizes = [base + (1 if i < extra else 0) for i in range(n_layers)]
    sizes = (PLANE_SIZE, *hidden_sizes, len(repertoire(mode)))
    neurons = []
    for prev, size in zip(sizes, sizes[1:]):
        neurons.extend(_draw_neuron(rng, prev, variant) for _ in range(size))
    net = FixedNetGenome(variant, mode, sizes, tuple(neurons))
    validate_fixed_net(net)
    return net


def activate_fixed(net: FixedNetGenome, plane: InputPlane) -> frozenset[BehaviorId]:
    """Plain feed-forward pass; behavior i triggers when output neuron i emits 1."""
    x = list(plane)
    i = 0
    for size in net.layer_sizes[1:]:
        nxt = []
        for _ in range(size):
            n = net.neurons[i]
            i += 1
            u = 0.0
            for j, w in zip(n.inputs, n.weights):
                u += w * x[j]
            lo, hi = (n.theta1, n.theta2) if n.theta1 <= n.theta2 else (n.theta2, n.theta1)
            if n.fn == "up":
                out = u >= lo
            elif n.fn == "down":
                out = u < lo
            elif n.fn == "ditch":
                out = lo <= u < hi
            else:
                out = u < lo or u >= hi
            nxt.append(1.0 if out else 0.0)
        x = nxt
    rep = repertoire(net.mode)
    return frozenset(rep[i] for i, out in enumerate(x) if out)


class FixedNetController:
    """DecisionSource adapter; execution order is the repertoire default."""

    def __init__(self, net: FixedNetGenome):
        validate_fixed_net(net)
        self.net = net
        self.order = repertoire(net.mode)

    def decide(self, plane: InputPlane) -> tuple[frozenset[BehaviorId], Sequence[BehaviorId]]:
        return activate_fixed(self.net, plane), self.order


def mutate_fixed(net: FixedNetGenome, rng: np.random.Generator, p_m: float) -> FixedNetGenome:
    """Weight-only variation: each weight/threshold/fn redraws with prob p_m."""
    if not 0.0 <= p_m <= 1.0:
        raise ValueError(f"p_m must be in [0, 1], got {p_m}")
    neurons = []
    for n in net.neurons:
        weights = list(n.weights)
        for i in range(len(weights)):
            if rng.random() < p_m:
                weights[i] = float(rng.uniform(-WEIGHT_BOUND, WEIGHT_BOUND))
        theta1 = float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND)) \
            if rng.random() < p_m else n.theta1
        theta2 = float(rng.uniform(-THRESHOLD_BOUND, THRESHOLD_BOUND)) \
            if rng.random() < p_m else n.theta2
        fn = THRESHOLD_FNS[int(rng.integers(0, 4))] if rng.random() < p_m else n.fn
        neurons.append(NeuronGene(n.inputs, tuple(weights), theta1, theta2, fn))
    return FixedNetGenome(net.variant, net.mode, net.layer_sizes, tuple(neurons))


def _topology_key(net: FixedNetGenome):
    return (net.variant, net.mode, net.layer_sizes, tuple(n.inputs for n in net.neurons))


def crossover_fixed(a: FixedNetGenome, b: FixedNetGenome,
                    rng: np.random.Generator) -> tuple[FixedNetGenome, FixedNetGenome]:
    """Single-point parameter crossover when topologies match, else clones.

    Random nets rarely share a topology, so early crossover is mostly a
    pass-through; once selection duplicates lineages the cut applies.
    """
    if Mode(a.mode) != Mode(b.mode):
        raise ModeMismatch(f"cannot cross {a.mode} with {b.mode}")
    if _topology_key(a) != _topology_key(b):
        return a, b
    cut = int(rng.integers(0, len(a.neurons) + 1))
    child1 = FixedNetGenome(a.variant, a.mode, a.layer_sizes,
                            a.neurons[:cut] + b.neurons[cut:])
    child2 = FixedNetGenome(b.variant, b.mode, b.layer_sizes,
                            b.neurons[:cut] + a.neurons[cut:])
    return child1, child2


def fixed_net_to_dict(net: FixedNetGenome) -> dict:
    return {
        "kind": "fixed",
        "variant": net.variant,
        "mode": net.mode.value,
        "layer_sizes": list(net.layer_sizes),
        "neurons": [
            {
                "inputs": list(n.inputs),
                "weights": [_hex(w) for w in n.weights],
                "theta1": _hex(n.theta1),
                "theta2": _hex(n.theta2),
                "fn": n.fn,
            }
            for n in net.neurons
        ],
    }


def fixed_net_from_dict(data: dict) -> FixedNetGenome:
    if not isinstance(data, dict) or data.get("kind") != "fixed":
        raise MalformedGenome("expected a fixed-net genome document (kind == 'fixed')")
    try:
        net = FixedNetGenome(
            variant=data["variant"],
            mode=Mode(data["mode"]),
            layer_sizes=tuple(int(v) for v in data["layer_sizes"]),
            neurons=tuple(
                NeuronGene(
                    inputs=tuple(int(v) for v in n["inputs"]),
                    weights=tuple(_unhex(w) for w in n["weights"]),
                    theta1=_unhex(n["theta1"]),
                    theta2=_unhex(n["theta2"]),
                    fn=n["fn"],
                )
                for n in data["neurons"]
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedGenome(f"malformed fixed-net document: {exc}") from exc
    validate_fixed_net(net)
    return net
