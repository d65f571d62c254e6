"""Free-group words over two generators, presentations, subgroup data.

A letter is a nonzero signed int: +1/-1 for the first generator and its
inverse, +2/-2 for the second.  Words are freely reduced on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def free_reduce(letters):
    """Cancel adjacent x, x^-1 pairs; returns a tuple."""
    out = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @property
    def is_identity(self):
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other):
        return Word(self.letters + other.letters)

    def inverse(self):
        return Word(tuple(-l for l in reversed(self.letters)))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        w = Word()
        for _ in range(k):
            w = w * self
        return w

    def cyclically_reduced(self):
        ls = list(self.letters)
        while len(ls) >= 2 and ls[0] == -ls[-1]:
            ls = ls[1:-1]
        return Word(tuple(ls))


def commutator(x: Word, y: Word) -> Word:
    return x.inverse() * y.inverse() * x * y


GENERATOR_NAMES = ("a", "b")


def letter_symbol(l, names=GENERATOR_NAMES):
    name = names[abs(l) - 1]
    return name if l > 0 else name.upper()


def format_word(w: Word, names=GENERATOR_NAMES) -> str:
    """Compact form: lowercase letters, uppercase for inverses ('aBA')."""
    if w.is_identity:
        return "1"
    return "".join(letter_symbol(l, names) for l in w.letters)


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple = GENERATOR_NAMES
    relators: tuple = ()

    def __post_init__(self):
        if len(self.generator_names) != 2:
            raise ValueError("exactly two generators are supported")
        object.__setattr__(self, "relators", tuple(self.relators))
        for r in self.relators:
            for l in r.letters:
                if abs(l) not in (1, 2):
                    raise ValueError(f"relator uses undeclared generator {l}")

    @property
    def ngens(self):
        return 2


@dataclass(frozen=True)
class SubgroupSpec:
    generators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for w in self.generators:
            for l in w.letters:
                if abs(l) not in (1, 2):
                    raise ValueError(f"subgroup word uses undeclared generator {l}")


WHOLE_GROUP = SubgroupSpec((Word((1,)), Word((2,))))
TRIVIAL_SUBGROUP = SubgroupSpec(())
