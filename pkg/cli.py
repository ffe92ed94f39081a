"""
cli.py
──────
Command-line entry point for modrep.

    modrep gadget   --m 6 --n 9 --strategy block --block-size 3 --out g9.json
    modrep verify   --gadget g9.json [--probes]
    modrep compress --gadget g9.json --input X.txt --out S.txt
    modrep recover  --gadget g9.json --input S.txt --out R.txt
    modrep matmul   --gadget g9.json --x X.txt --y Y.txt [--naive] [--out D.txt]
    modrep bench    --gadget g9.json --levels 3 --csv out.csv

Every subcommand also accepts --config run.yaml; flags given on the command
line override the YAML values.

Exit codes: 0 success / verified, 1 verification failed,
2 infeasible or search budget exhausted, 3 bad input.

`gadget` reports the configured seed in its summary line and JSON payload.
Without --out it writes only the gadget file to stdout, and the seed then
survives only in the recipe of seeded strategies.
"""

import argparse
import json
import logging
import sys

from pydantic import ValidationError

from base_search import SearchOutcome
from bench_runner import run_bench, write_bench_csv
from bilinear import (
    OpTally,
    matmul_represent,
    naive_matmul,
    probe_represented_product,
    verify_represented_product,
)
from config import (
    LOG_LEVEL,
    PRIME_POWER_MESSAGE,
    PROBE_LIMIT,
    SYMBOLIC_LIMIT,
    ExperimentConfig,
    build_config,
)
from errors import DimensionMismatchError, InvalidInputError, ModrepError
from gadget import (
    GadgetTarget,
    block_partition,
    dot_poly,
    dot_target_poly,
    from_target,
    inspect_matrices,
    kronecker_power,
    trivial,
)
from gadget_search import exhaustive_01, local_search
from gadget_store import GadgetFile, load_record, save_gadget
from matrix_io import format_matrix, load_matrix, save_matrix
from repcheck import classify_poly, classify_product_table
from sketch import (
    compress,
    probe_recover,
    recover_matrix,
    verify_left,
    verify_recover,
    verify_right,
)
from zmod import Modulus, factorize

logger = logging.getLogger(__name__)

EXIT_OK         = 0
EXIT_FAILED     = 1
EXIT_INFEASIBLE = 2
EXIT_BAD_INPUT  = 3


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with EXIT_BAD_INPUT instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_BAD_INPUT)


# ─────────────────────────────────────────────────────────────────────────────
# Parser
# ─────────────────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=None, help="Modulus (default from MODREP_MODULUS, 6).")
    common.add_argument("--seed", type=int, default=None, help="Random seed, recorded in outputs.")
    common.add_argument("--config", type=str, default=None, help="YAML file of option defaults.")
    common.add_argument("--format", choices=["text", "json"], default=None, help="Report format.")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    common.add_argument("-q", "--quiet", action="store_true", help="Warnings only.")

    parser = _Parser(prog="modrep", description="a-strong representations modulo composites.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("gadget", parents=[common], help="Generate a dot-product gadget.")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--strategy", choices=sorted(_GENERATORS), default=None)
    p.add_argument("--block-size", dest="s", type=int, default=None)
    p.add_argument("--t", type=int, default=None, help="Width for --strategy exhaustive.")
    p.add_argument("--t-goal", dest="t_goal", type=int, default=None, help="Target width for --strategy search.")
    p.add_argument("--budget", type=int, default=None, help="Search iteration cap.")
    p.add_argument("--levels", type=int, default=None, help="Kronecker power of the generated gadget.")
    p.add_argument("--target", type=str, default=None, help="Target matrix file for --strategy target.")
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("verify", parents=[common], help="Verify a gadget file.")
    p.add_argument("--gadget", type=str, default=None)
    p.add_argument("--probes", action="store_true", default=None, help="Force the elementary-matrix probe sweep.")

    for name, help_text in (("compress", "X -> B^T X B."), ("recover", "S -> C S C^T.")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--gadget", type=str, default=None)
        p.add_argument("--input", type=str, default=None)
        p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("matmul", parents=[common], help="Represented (or naive) matrix product.")
    p.add_argument("--gadget", type=str, default=None)
    p.add_argument("--x", type=str, default=None)
    p.add_argument("--y", type=str, default=None)
    p.add_argument("--naive", action="store_true", default=None)
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("bench", parents=[common], help="Counted multiplications over the Kronecker tower.")
    p.add_argument("--gadget", type=str, default=None)
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--csv", type=str, default=None)
    return parser


# ─────────────────────────────────────────────────────────────────────────────
# Helpers
# ─────────────────────────────────────────────────────────────────────────────

def _require(value, flag: str, command: str):
    if value is None:
        raise InvalidInputError(f"{command} needs {flag}")
    return value


def _generator_modulus(m: int) -> Modulus:
    mod = factorize(m)
    if not mod.non_prime_power:
        raise _PrimePower()
    return mod


class _PrimePower(ModrepError):
    pass


def _emit(cfg: ExperimentConfig, text: str, payload: dict):
    print(json.dumps(payload, indent=2) if cfg.format == "json" else text)


def _write_matrix(cfg: ExperimentConfig, matrix, mod: Modulus, label: str):
    if cfg.out:
        save_matrix(cfg.out, matrix, mod)
        logger.info("wrote %s to %s", label, cfg.out)
    else:
        sys.stdout.write(format_matrix(matrix, mod))


def _load_same_modulus(path, mod: Modulus):
    matrix, file_mod = load_matrix(path)
    if file_mod.m != mod.m:
        raise DimensionMismatchError(f"{path} is over Z_{file_mod.m} but the gadget is over Z_{mod.m}")
    return matrix


# ─────────────────────────────────────────────────────────────────────────────
# gadget
# ─────────────────────────────────────────────────────────────────────────────

def _gen_trivial(cfg, mod):
    return SearchOutcome(True, trivial(_require(cfg.n, "--n", "trivial"), mod), None, 0, "trivial")


def _gen_block(cfg, mod):
    g = block_partition(_require(cfg.n, "--n", "block"), _require(cfg.s, "--block-size", "block"), mod)
    return SearchOutcome(True, g, g.t, 0, "block partition")


def _gen_target(cfg, mod):
    M, file_mod = load_matrix(_require(cfg.target, "--target", "target"))
    if file_mod.m != mod.m:
        raise DimensionMismatchError(f"target file is over Z_{file_mod.m}, --m is {mod.m}")
    g = from_target(GadgetTarget.from_matrix(M, mod))
    return SearchOutcome(True, g, g.t, 0, "rank factorization")


def _gen_search(cfg, mod):
    return local_search(_require(cfg.n, "--n", "search"), _require(cfg.t_goal, "--t-goal", "search"),
                        seed=cfg.seed, budget=cfg.budget, mod=mod)


def _gen_exhaustive(cfg, mod):
    return exhaustive_01(_require(cfg.n, "--n", "exhaustive"), _require(cfg.t, "--t", "exhaustive"), mod)


_GENERATORS = {
    "trivial":    _gen_trivial,
    "block":      _gen_block,
    "target":     _gen_target,
    "search":     _gen_search,
    "exhaustive": _gen_exhaustive,
}


def _cmd_gadget(cfg: ExperimentConfig) -> int:
    mod = _generator_modulus(cfg.m)
    if not mod.square_free:
        raise InvalidInputError(f"{mod} is not square-free; generators need prime fields")
    key = cfg.strategy.lower().strip()
    if key not in _GENERATORS:
        raise ValueError(f"Unknown strategy '{cfg.strategy}'. Choose from: {list(_GENERATORS.keys())}")

    outcome = _GENERATORS[key](cfg, mod)
    if not outcome.found:
        _emit(cfg, f"infeasible: {outcome.report}",
              {"found": False, "report": outcome.report, "best_t": outcome.best_t, "seed": cfg.seed})
        return EXIT_INFEASIBLE

    g = kronecker_power(outcome.gadget, cfg.levels)
    if not cfg.out:
        sys.stdout.write(GadgetFile.from_gadget(g).dumps())
        return EXIT_OK
    save_gadget(cfg.out, g)
    _emit(cfg, f"gadget n={g.n} t={g.t} m={g.mod.m} seed={cfg.seed} recipe={g.recipe}",
          {"n": g.n, "t": g.t, "m": g.mod.m, "seed": cfg.seed, "recipe": g.recipe, "out": str(cfg.out)})
    return EXIT_OK


# ─────────────────────────────────────────────────────────────────────────────
# verify
# ─────────────────────────────────────────────────────────────────────────────

def _cmd_verify(cfg: ExperimentConfig) -> int:
    record = load_record(_require(cfg.gadget, "--gadget", "verify"))
    mod = factorize(record.m)
    B, C = record.matrices()
    inspection = inspect_matrices(B, C, mod)
    if not inspection.valid:
        _emit(cfg, f"INVALID gadget: {inspection.reason} at {inspection.position} (value {inspection.value})",
              {"valid": False, "reason": inspection.reason,
               "position": inspection.position, "value": inspection.value})
        return EXIT_FAILED

    g = record.to_gadget()
    checks = {}
    if g.n <= SYMBOLIC_LIMIT:
        checks["dot product"] = classify_poly(dot_target_poly(g.n, mod.m), dot_poly(g), mod)
    else:
        checks["dot product"] = classify_product_table(g.M, 1, mod)
    checks["right sketch"] = verify_right(g)
    checks["left sketch"] = verify_left(g)
    checks["compress/recover"] = verify_recover(g)
    checks["represented product"] = verify_represented_product(g)
    if cfg.probes or g.n <= PROBE_LIMIT:
        checks["probe compress/recover"] = probe_recover(g).aggregate
        checks["probe represented product"] = probe_represented_product(g).aggregate

    ok = all(c.is_one_a_strong for c in checks.values())
    lines = [f"gadget: n={g.n} t={g.t} m={mod.m} recipe={g.recipe}",
             f"target: valid{' (symmetric)' if g.target.is_symmetric else ''}"]
    for name, cls in checks.items():
        line = f"{name + ':':<28}{cls.strongest()}"
        if not cls.is_one_a_strong and cls.witness is not None:
            w = cls.witness
            line += f"  witness {w.monomial} target={w.target} candidate={w.candidate}"
        lines.append(line)
    lines.append(f"one-a-strong: {'confirmed' if ok else 'FAILED'}")
    _emit(cfg, "\n".join(lines), {
        "valid": True, "n": g.n, "t": g.t, "m": mod.m, "recipe": g.recipe,
        "checks": {name: cls.flags() for name, cls in checks.items()},
        "one_a_strong": ok,
    })
    return EXIT_OK if ok else EXIT_FAILED


# ─────────────────────────────────────────────────────────────────────────────
# compress / recover / matmul / bench
# ─────────────────────────────────────────────────────────────────────────────

def _cmd_compress(cfg: ExperimentConfig) -> int:
    g = load_record(_require(cfg.gadget, "--gadget", "compress")).to_gadget()
    X = _load_same_modulus(_require(cfg.input, "--input", "compress"), g.mod)
    bundle = compress(X, g)
    _write_matrix(cfg, bundle.S, g.mod, "sketch")
    logger.info("compressed %d×%d -> %d×%d", g.n, g.n, g.t, g.t)
    return EXIT_OK


def _cmd_recover(cfg: ExperimentConfig) -> int:
    g = load_record(_require(cfg.gadget, "--gadget", "recover")).to_gadget()
    S = _load_same_modulus(_require(cfg.input, "--input", "recover"), g.mod)
    _write_matrix(cfg, recover_matrix(S, g), g.mod, "recovered matrix")
    return EXIT_OK


def _cmd_matmul(cfg: ExperimentConfig) -> int:
    x_path = _require(cfg.x, "--x", "matmul")
    y_path = _require(cfg.y, "--y", "matmul")
    tally = OpTally()
    if cfg.naive:
        X, mod = load_matrix(x_path)
        Y = _load_same_modulus(y_path, mod)
        D = naive_matmul(X, Y, tally, mod)
    else:
        g = load_record(_require(cfg.gadget, "--gadget", "matmul")).to_gadget()
        mod = g.mod
        X = _load_same_modulus(x_path, mod)
        Y = _load_same_modulus(y_path, mod)
        D = matmul_represent(X, Y, g, tally)
    _write_matrix(cfg, D, mod, "product")
    sys.stderr.write(f"counted multiplications: {tally.counted_mults}\n")
    return EXIT_OK


def _cmd_bench(cfg: ExperimentConfig) -> int:
    g = load_record(_require(cfg.gadget, "--gadget", "bench")).to_gadget()
    df = run_bench(g, cfg.levels, seed=cfg.seed)
    if cfg.csv:
        write_bench_csv(df, cfg.csv)
    if cfg.format == "json":
        print(df.to_json(orient="records", indent=2))
    else:
        print(df.drop(columns=["wall_ms"]).to_string(index=False))
    return EXIT_OK if bool(df["verified"].all()) else EXIT_FAILED


_COMMANDS = {
    "gadget":   _cmd_gadget,
    "verify":   _cmd_verify,
    "compress": _cmd_compress,
    "recover":  _cmd_recover,
    "matmul":   _cmd_matmul,
    "bench":    _cmd_bench,
}


# ─────────────────────────────────────────────────────────────────────────────
# Entry point
# ─────────────────────────────────────────────────────────────────────────────

def _configure_logging(args):
    level = "DEBUG" if args.verbose else "WARNING" if args.quiet else LOG_LEVEL
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)

    skip = {"command", "config", "verbose", "quiet"}
    cli_values = {k: v for k, v in vars(args).items() if k not in skip}
    try:
        cfg = build_config(args.command, cli_values, args.config)
        return _COMMANDS[cfg.command](cfg)
    except _PrimePower:
        sys.stderr.write(PRIME_POWER_MESSAGE + "\n")
        return EXIT_BAD_INPUT
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc.errors()[0]['msg']}\n")
        return EXIT_BAD_INPUT
    except (ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
