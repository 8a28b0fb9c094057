"""Feasibility limits. Configuration, not hard-coded policy.

Precedence: built-in defaults < TLF_LIMITS json file < explicit overrides
(CLI --limit-override KEY=VAL). Exceeding a limit raises InfeasibleError.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

from .errors import InfeasibleError, ValidationError

_TURAN_DEFAULT = {2: 8, 3: 7, 4: 7}


@dataclass(frozen=True)
class Limits:
    turan_n_r2: int = 8
    turan_n_r3: int = 7
    turan_n_r4: int = 7
    canon_n: int = 10
    regular_m: int = 5
    regular_r: int = 3
    rpartite_exact_rm: int = 14
    solver_state_cap: int = 1 << 24  # memo entries per solver call
    split_depth: int = 6
    iso_depth: int = 3
    witness_cap: int = 10

    def turan_max_n(self, r: int) -> int:
        attr = f"turan_n_r{r}"
        if hasattr(self, attr):
            return getattr(self, attr)
        return 0

    def check_turan(self, n: int, r: int) -> None:
        cap = self.turan_max_n(r)
        if n > cap:
            raise InfeasibleError(
                f"exact search at n={n}, r={r} exceeds the configured limit "
                f"(max n={cap}); raise it via --limit-override turan_n_r{r}=N "
                f"or a TLF_LIMITS file if you mean it"
            )

    def check_solver_state(self, n: int, r: int) -> None:
        states = (1 << n) * (n ** (r - 1) + 1)
        if states > self.solver_state_cap:
            raise InfeasibleError(
                f"solver state space 2^{n}*({n}^{r - 1}+1) = {states} exceeds "
                f"solver_state_cap={self.solver_state_cap}"
            )


def _apply(base: Limits, mapping: dict) -> Limits:
    fields = base.__dataclass_fields__
    bad = [k for k in mapping if k not in fields]
    if bad:
        raise ValidationError(f"unknown limit keys: {bad}; known: {sorted(fields)}")
    try:
        typed = {k: int(v) for k, v in mapping.items()}
    except (TypeError, ValueError):
        raise ValidationError(f"limit values must be ints: {mapping}") from None
    return replace(base, **typed)


def load_limits(overrides: dict | None = None) -> Limits:
    lim = Limits()
    path = os.environ.get("TLF_LIMITS")
    if path:
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read TLF_LIMITS file {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ValidationError(f"TLF_LIMITS file {path} must hold a json object")
        lim = _apply(lim, data)
    if overrides:
        lim = _apply(lim, overrides)
    return lim
