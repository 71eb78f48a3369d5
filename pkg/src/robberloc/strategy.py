"""Deterministic cop strategies keyed by game state."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

# A state key is the extended robber set plus an optional phase (the round
# index inside a stride for restricted subdivision play).
StateKey = tuple[frozenset, "int | None"]


class StrategyUndefined(KeyError):
    def __init__(self, key: StateKey):
        super().__init__(key)
        self.key = key

    def __str__(self) -> str:
        return f"strategy has no entry for state {key_string(self.key)}"


def make_key(extended: Iterable[str], phase: int | None = None) -> StateKey:
    return (frozenset(extended), phase)


def set_string(names: Iterable[str]) -> str:
    return ",".join(sorted(names))


def key_string(key: StateKey) -> str:
    names, phase = key
    s = set_string(names)
    return s if phase is None else f"{s}@{phase}"


def parse_key(text: str) -> StateKey:
    phase = None
    if "@" in text:
        text, tail = text.rsplit("@", 1)
        phase = int(tail)
    names = frozenset(x for x in text.split(",") if x)
    return (names, phase)


@dataclass
class StrategyTable:
    """Explicit mapping from state keys to ordered probe tuples."""

    entries: dict

    def __init__(self, entries: Mapping[StateKey, Iterable[str]] | None = None):
        self.entries = {k: tuple(v) for k, v in (entries or {}).items()}

    def __getitem__(self, key: StateKey) -> tuple[str, ...]:
        try:
            return self.entries[key]
        except KeyError:
            raise StrategyUndefined(key) from None

    def __contains__(self, key: object) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[StateKey]:
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StrategyTable):
            return NotImplemented
        return self.entries == other.entries

    def items(self):
        return self.entries.items()

    def to_json(self) -> dict[str, list[str]]:
        return {key_string(k): list(v) for k, v in sorted(self.entries.items(), key=lambda kv: key_string(kv[0]))}

    @classmethod
    def from_json(cls, data: Mapping[str, Iterable[str]]) -> "StrategyTable":
        return cls({parse_key(k): tuple(v) for k, v in data.items()})
