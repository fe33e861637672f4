"""The (3,3) secret sharing protocol state machine.

The dealer encodes a 2-bit secret as a Pauli gate on qubit 1 or 6 of a
shared GHZ product state, the three reconstructors measure their pairs in
the Bell basis, and the run is recorded as an ordered announcement
transcript.  Reconstruction never reads the transcript's ground truth.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Union

from .qcore import (
    BellOutcome,
    BellPair,
    PauliGate,
    StateLabel,
    apply_gate,
    measure_bell,
    outcome_from_ascii,
    prepare_state,
)

ENCODING_POSITIONS = (1, 6)

# Measurement order follows particle ownership: P1 holds (1,6), P2 (2,5), P3 (3,4).
P1_PAIR: BellPair = (1, 6)
P2_PAIR: BellPair = (2, 5)
P3_PAIR: BellPair = (3, 4)


class Party:
    """Protocol roles and the qubit pairs they own."""

    DEALER = "Dealer"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"

    OWNED_PAIRS: dict[str, BellPair | None] = {
        DEALER: None,
        P1: P1_PAIR,
        P2: P2_PAIR,
        P3: P3_PAIR,
    }


def check_secret(bits: str) -> str:
    if len(bits) != 2 or any(c not in "01" for c in bits):
        raise ValueError(f"secret must be a 2-character 0/1 string, got {bits!r}")
    return bits


def check_position(position: int) -> int:
    if position not in ENCODING_POSITIONS:
        raise ValueError(f"encoding position must be 1 or 6, got {position!r}")
    return position


@dataclass(frozen=True)
class GateAction:
    """The carrier of the secret: a gate and the qubit it toggles."""

    gate: PauliGate
    position: int

    def __post_init__(self) -> None:
        check_position(self.position)

    def render(self) -> str:
        return f"{self.gate.value}{self.position}"


_ENCODE = {
    ("00", 1): PauliGate.I,
    ("01", 1): PauliGate.X,
    ("11", 1): PauliGate.IY,
    ("10", 1): PauliGate.Z,
    ("11", 6): PauliGate.I,
    ("10", 6): PauliGate.X,
    ("00", 6): PauliGate.IY,
    ("01", 6): PauliGate.Z,
}
_DECODE = {(gate, position): bits for (bits, position), gate in _ENCODE.items()}


def encode_secret(bits: str, position: int) -> GateAction:
    """Map a 2-bit secret to the gate the dealer applies at the given position."""
    check_secret(bits)
    check_position(position)
    return GateAction(_ENCODE[(bits, position)], position)


def decode_secret(action: GateAction) -> str:
    """Inverse of encode_secret at the action's position."""
    return _DECODE[(action.gate, action.position)]


@dataclass(frozen=True)
class MeasurementAnnouncement:
    party: str
    pair: BellPair
    outcome: BellOutcome

    def __post_init__(self) -> None:
        owned = Party.OWNED_PAIRS.get(self.party)
        if owned is None or tuple(self.pair) != owned:
            raise ValueError(f"{self.party} does not own pair {self.pair}")

    def to_dict(self) -> dict:
        return {
            "type": "measurement",
            "party": self.party,
            "pair": list(self.pair),
            "outcome": self.outcome.ascii,
        }


@dataclass(frozen=True)
class StateLabelAnnouncement:
    label: StateLabel

    def to_dict(self) -> dict:
        return {"type": "dealer_state", "state": self.label.value}


@dataclass(frozen=True)
class PositionAnnouncement:
    position: int

    def __post_init__(self) -> None:
        check_position(self.position)

    def to_dict(self) -> dict:
        return {"type": "dealer_position", "position": self.position}


Announcement = Union[MeasurementAnnouncement, StateLabelAnnouncement, PositionAnnouncement]


def announcement_from_dict(data: dict) -> Announcement:
    kind = data.get("type")
    if kind == "measurement":
        return MeasurementAnnouncement(
            data["party"], tuple(data["pair"]), outcome_from_ascii(data["outcome"])
        )
    if kind == "dealer_state":
        return StateLabelAnnouncement(StateLabel(data["state"]))
    if kind == "dealer_position":
        return PositionAnnouncement(data["position"])
    raise ValueError(f"unknown announcement type {kind!r}")


def make_announcements(
    o2: BellOutcome,
    o3: BellOutcome,
    label: StateLabel,
    o1: BellOutcome,
    position: int,
) -> tuple[Announcement, ...]:
    """Announcements in the honest order: P2, P3, dealer's state, P1, dealer's position."""
    return (
        MeasurementAnnouncement(Party.P2, P2_PAIR, o2),
        MeasurementAnnouncement(Party.P3, P3_PAIR, o3),
        StateLabelAnnouncement(label),
        MeasurementAnnouncement(Party.P1, P1_PAIR, o1),
        PositionAnnouncement(position),
    )


@dataclass(frozen=True)
class Transcript:
    """One protocol run: seed, ground truth, and the ordered announcements.

    true_label/true_action are verification-only; reconstruction must not
    read them.
    """

    seed: int
    true_label: StateLabel
    true_action: GateAction
    announcements: tuple[Announcement, ...]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "true_config": {
                "state": self.true_label.value,
                "gate": self.true_action.gate.value,
                "position": self.true_action.position,
            },
            "announcements": [a.to_dict() for a in self.announcements],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "Transcript":
        config = data["true_config"]
        return cls(
            seed=data["seed"],
            true_label=StateLabel(config["state"]),
            true_action=GateAction(PauliGate(config["gate"]), config["position"]),
            announcements=tuple(announcement_from_dict(a) for a in data["announcements"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        return cls.from_dict(json.loads(text))


def run_protocol(
    label: StateLabel | None,
    bits: str,
    position: int | None,
    seed: int,
) -> Transcript:
    """Run one honest protocol instance, deterministically per seed.

    A None label or position is drawn uniformly from the seeded generator
    (label first, then position, then the three measurements in order
    (1,6), (2,5), (3,4)).
    """
    check_secret(bits)
    rng = random.Random(seed)
    if label is None:
        label = (StateLabel.A, StateLabel.B, StateLabel.C, StateLabel.D)[rng.randrange(4)]
    if position is None:
        position = ENCODING_POSITIONS[rng.randrange(2)]
    action = encode_secret(bits, position)
    state = apply_gate(prepare_state(label), action.gate, action.position)
    o1, state = measure_bell(state, P1_PAIR, rng)
    o2, state = measure_bell(state, P2_PAIR, rng)
    o3, state = measure_bell(state, P3_PAIR, rng)
    return Transcript(
        seed=seed,
        true_label=label,
        true_action=action,
        announcements=make_announcements(o2, o3, label, o1, position),
    )


def replay(transcript: Transcript):
    """Reconstruct from a stored transcript's announcements only."""
    from .recon import reconstruct

    return reconstruct(transcript.announcements)
