"""Regularity of complete simplicial fans: is the fan the normal fan of a
polytope?

One strict inequality per wall (the normalized ridge dependence applied to a
height vector), heights of a reference facet pinned to zero to quotient out
linear functions.  Both verdicts ship exact certificates: a height vector,
or a nonnegative Gordan combination of the wall rows summing to zero.
"""

from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .complexes import SubwordComplex, commutation_class, multiassoc_word
from .counting import counting_matrix, enumerate_embeddings, restricted_matrix
from .fan import Fan, FanCheckReport, Wall, build_fan, check_complete, wall_relations
from .linalg import Q, QMatrix, strict_feasibility

__all__ = [
    "RegularityResult",
    "check_regular",
    "verify_certificate",
    "SurveyRow",
    "survey",
    "survey_obs_deletions",
    "CACHE_ENV_VAR",
]

CACHE_ENV_VAR = "SUBWORD_FANS_CACHE"


@dataclass
class RegularityResult:
    """Verdict with an exactly checkable certificate.

    ``heights`` (regular): one rational height per position, zero on the
    reference facet, making every wall inequality strictly positive.
    ``farkas`` (non-regular): pairs (wall index, weight) with positive
    weights whose combination of wall rows vanishes identically.
    """

    verdict: str                                  # "regular" | "non_regular"
    reference_facet: tuple[int, ...]
    wall_count: int
    heights: list[Fraction] | None = None
    farkas: list[tuple[int, Fraction]] | None = None
    walls: list[Wall] = field(default_factory=list, repr=False)

    @property
    def regular(self) -> bool:
        return self.verdict == "regular"

    def to_json(self) -> str:
        return json.dumps({
            "verdict": self.verdict,
            "reference_facet": [p + 1 for p in self.reference_facet],
            "wall_count": self.wall_count,
            "heights": None if self.heights is None else [str(x) for x in self.heights],
            "farkas": None if self.farkas is None
            else [[i, str(w)] for i, w in self.farkas],
        }, sort_keys=True)


def _wall_row(wall: Wall, r: int) -> list[Fraction]:
    row = [Q(0)] * r
    for p, c in wall.coeffs.items():
        row[p] = c
    return row


def check_regular(fan: Fan, D: QMatrix | None = None, *,
                  completeness: FanCheckReport | None = None,
                  walls: list[Wall] | None = None,
                  workers: int = 1) -> RegularityResult:
    """Decide regularity of a verified-complete fan, with certificates.

    Completeness must be certified first: pass a ``completeness`` report or
    a Gale dual ``D`` so it can be checked here.
    """
    if completeness is None:
        if D is None:
            raise ValueError("pass a Gale dual D or a completeness report")
        completeness = check_complete(fan, D, workers=workers)
    if not completeness.complete:
        raise ValueError("fan is not verified complete; regularity undefined")
    ref = completeness.reference_facet or min(fan.complex.facets())
    if walls is None:
        walls = wall_relations(fan)
    r = fan.rays.ncols
    free = [p for p in range(r) if p not in set(ref)]

    # Identical gauged rows collapse to one LP column; any Gordan weight on
    # the class lifts to its representative wall.
    unique: dict[tuple[Fraction, ...], int] = {}
    reps: list[int] = []
    rows: list[list[Fraction]] = []
    for idx, wall in enumerate(walls):
        full = _wall_row(wall, r)
        key = tuple(full[p] for p in free)
        if key not in unique:
            unique[key] = len(rows)
            rows.append(list(key))
            reps.append(idx)
    feasible, cert = strict_feasibility(rows)
    if feasible:
        heights = [Q(0)] * r
        for t, p in enumerate(free):
            heights[p] = cert[t]
        result = RegularityResult("regular", ref, len(walls),
                                  heights=heights, walls=walls)
    else:
        farkas = [(reps[t], w) for t, w in enumerate(cert) if w != 0]
        result = RegularityResult("non_regular", ref, len(walls),
                                  farkas=farkas, walls=walls)
    if not verify_certificate(fan, result):
        raise RuntimeError("internal error: certificate failed verification")
    return result


def verify_certificate(fan: Fan, result: RegularityResult,
                       walls: list[Wall] | None = None) -> bool:
    """Replay a regularity certificate in exact arithmetic.

    Regular: every wall inequality evaluates strictly positive at the
    heights.  Non-regular: the weights are nonnegative, not all zero, and
    the weighted wall rows sum to the zero vector, which contradicts any
    strictly positive height assignment.
    """
    walls = walls if walls is not None else (result.walls or wall_relations(fan))
    r = fan.rays.ncols
    if result.verdict == "regular":
        if result.heights is None or len(result.heights) != r:
            return False
        if any(result.heights[p] != 0 for p in result.reference_facet):
            return False
        for wall in walls:
            value = sum(c * result.heights[p] for p, c in wall.coeffs.items())
            if not value > 0:
                return False
        return True
    if result.verdict == "non_regular":
        if not result.farkas:
            return False
        total = [Q(0)] * r
        for idx, weight in result.farkas:
            if weight <= 0 or not 0 <= idx < len(walls):
                return False
            for p, c in walls[idx].coeffs.items():
                total[p] += weight * c
        return all(x == 0 for x in total)
    return False


# ---------------------------------------------------------------------------
# Regularity surveys over embeddings
# ---------------------------------------------------------------------------

@dataclass
class SurveyRow:
    word: tuple[int, ...]
    m: int
    embedding: tuple[int, ...]      # 0-based positions
    complete: bool
    regular: bool | None
    wall_count: int
    runtime_ms: int

    def key(self) -> str:
        word = "".join(map(str, self.word))
        emb = " ".join(str(p + 1) for p in self.embedding)
        return f"{word}|{self.m}|{emb}"

    def csv_row(self) -> list:
        return ["".join(map(str, self.word)), self.m,
                " ".join(str(p + 1) for p in self.embedding),
                int(self.complete),
                "" if self.regular is None else int(self.regular),
                self.wall_count, self.runtime_ms]


SURVEY_HEADER = ["word", "m", "embedding", "complete", "regular",
                 "wall_count", "runtime_ms"]


def _existing_keys(path: str) -> set[str]:
    keys: set[str] = set()
    if path and os.path.exists(path):
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                keys.add(f"{row['word']}|{row['m']}|{row['embedding']}")
    return keys


def survey_instance(n: int, c: Sequence[int], word: Sequence[int], m: int,
                    embedding: Sequence[int]) -> SurveyRow:
    """Build the fan of one embedded word and record its verdicts."""
    t0 = time.monotonic()
    c = tuple(c)
    word = tuple(word)
    complex_ = SubwordComplex(n, word)
    complex_.reduced_subwords()  # raises early when the word misses w0
    D_full = counting_matrix(n, c, m)
    D = restricted_matrix(D_full, embedding)
    rays = D.kernel_basis()
    fan = build_fan(complex_, rays)
    report = check_complete(fan, D)
    regular: bool | None = None
    wall_count = 0
    if report.complete:
        result = check_regular(fan, completeness=report)
        regular = result.regular
        wall_count = result.wall_count
    ms = int((time.monotonic() - t0) * 1000)
    return SurveyRow(word, m, tuple(embedding), report.complete, regular,
                     wall_count, ms)


def survey(n: int, k: int, c: Sequence[int], m_max: int,
           out_csv: str | None = None,
           limit: int | None = None,
           max_words: int | None = None,
           log=None) -> dict[str, int]:
    """Regularity survey over the commutation class of c^k w0(c) and its
    embeddings into longer powers c^m, m <= m_max.

    Rows append to ``out_csv`` (resumable: already-recorded instances are
    skipped); returns the tally {"regular": .., "non_regular": ..,
    "incomplete": .., "rows": ..}.
    """
    c = tuple(c)
    base = multiassoc_word(n, k, c)
    words = sorted(commutation_class(n, base))
    if max_words is not None:
        words = words[:max_words]
    done = _existing_keys(out_csv) if out_csv else set()
    tally = {"regular": 0, "non_regular": 0, "incomplete": 0, "rows": 0}
    writer = None
    handle = None
    if out_csv:
        new_file = not os.path.exists(out_csv)
        handle = open(out_csv, "a", newline="")
        writer = csv.writer(handle)
        if new_file:
            writer.writerow(SURVEY_HEADER)
    try:
        budget = limit if limit is not None else float("inf")
        for word in words:
            r = len(word)
            m_min = -(-r // n)
            for m in range(m_min, m_max + 1):
                for emb in enumerate_embeddings(word, c * m):
                    if budget <= 0:
                        return tally
                    row = SurveyRow(tuple(word), m, emb, True, None, 0, 0)
                    if row.key() in done:
                        continue
                    row = survey_instance(n, c, word, m, emb)
                    budget -= 1
                    tally["rows"] += 1
                    if not row.complete:
                        tally["incomplete"] += 1
                    elif row.regular:
                        tally["regular"] += 1
                    else:
                        tally["non_regular"] += 1
                    if writer:
                        writer.writerow(row.csv_row())
                        handle.flush()
                    if log:
                        log(row)
    finally:
        if handle:
            handle.close()
    return tally


def survey_obs_deletions(m: int = 5, c: Sequence[int] = (1, 2, 3),
                         embeddings_per_word: int = 1) -> list[tuple[int, str]]:
    """Verdicts for the ten one-letter deletions of the obstruction word.

    Returns (deleted 0-based position, status) per deletion and embedding
    into c^m, status one of "regular", "non_regular", "incomplete",
    "not_spherical" (the deletion of the unique letter 3 leaves no reduced
    expression), or "no_embedding".  Observational: the obstruction is
    minimal when every spherical deletion admits a regular fan.
    """
    from .complexes import OBS_A3_WORD

    out = []
    for p in range(len(OBS_A3_WORD)):
        word = OBS_A3_WORD[:p] + OBS_A3_WORD[p + 1:]
        count = 0
        for emb in enumerate_embeddings(word, tuple(c) * m):
            try:
                row = survey_instance(3, c, word, m, emb)
            except ValueError:
                out.append((p, "not_spherical"))
                count += 1
                break
            status = ("regular" if row.regular else "non_regular") \
                if row.complete else "incomplete"
            out.append((p, status))
            count += 1
            if count >= embeddings_per_word:
                break
        if count == 0:
            out.append((p, "no_embedding"))
    return out
