"""Backend selection: compiled kernel when importable, pure loop otherwise.

Set LLLAB_BACKEND=python to force the fallback (used by the benchmark and
by the cross-backend equality tests).
"""

import os
from dataclasses import dataclass

import numpy as np

from . import _mtloop
from ._mtcompile import MTProgram, compile_instance

_kernel = None
if os.environ.get("LLLAB_BACKEND", "").lower() != "python":
    try:
        from . import _mtkernel as _kernel
    except ImportError:
        _kernel = None


def backend_name() -> str:
    return "cython" if _kernel is not None else "python"


def has_kernel() -> bool:
    return _kernel is not None


def compiled(inst) -> MTProgram:
    prog = getattr(inst, "_mt_program", None)
    if prog is None:
        prog = compile_instance(inst)
        inst._mt_program = prog
    return prog


@dataclass
class FastResult:
    f: list
    t: list
    ind: list
    steps: int
    status: str
    backend: str

    def surviving_domains(self, inst):
        from .engine import violated_domains

        if self.status == "stabilized":
            return []
        return sorted(violated_domains(inst, self.f))


def fast_run(inst, seed, max_steps=10 ** 6, rule="lex", rule_seed=0,
             exact_rounds=-1, key_map=None, force_backend=None) -> FastResult:
    """Run the compiled process; raises when the instance is unsupported.

    key_map lifts the table: variable x reads the stream of key_map[x]
    (identity by default, a coloring for shared tables).
    """
    prog = compiled(inst)
    if not prog.supported:
        raise ValueError(f"instance not supported by fast backends: {prog.reason}")
    if key_map is None:
        keys = np.arange(prog.n_vars, dtype=np.int64)
    else:
        keys = np.asarray(list(key_map), dtype=np.int64)
        if keys.shape[0] != prog.n_vars:
            raise ValueError("key_map must cover every variable")
    use = force_backend or backend_name()
    if use == "cython" and _kernel is not None:
        f, t, ind, steps, status = _kernel.fast_run(
            prog, keys, seed, rule, rule_seed, max_steps, exact_rounds)
        f, t, ind = f.tolist(), t.tolist(), ind.tolist()
    else:
        f, t, ind, steps, status = _mtloop.fast_run(
            prog, keys.tolist(), seed, rule, rule_seed, max_steps, exact_rounds)
    status_name = "stabilized" if status == 0 else "step-limit"
    return FastResult(f, t, ind, steps, status_name, use)
