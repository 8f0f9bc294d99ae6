"""Command-line surface: parameter sweeps, preset result tables, and inequality checks.

Subcommands: ``prior``, ``figure``, ``security``, ``montecarlo``, ``check-all``.
Tables are written as CSV (default) or JSON; any violated inequality check is
reported as a JSON list on stderr and turns the exit code to 1.  Usage errors
exit with 2.  Column schemas are documented in docs/formats.md.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import bayes, montecarlo, symmetry, symspace
from .protocol import ProtocolParams, Codeword, PrivateKey, decrypt, encrypt

FIGURE1_EVENTS = {8: (0, 2, 4, 6, 8), 9: (2, 4, 6)}


def _parse_int_list(text: str) -> list[int]:
    """Parse "3", "2,4,8", "1-10", or mixtures thereof into a sorted list."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    out = sorted(set(values))
    if not out:
        raise argparse.ArgumentTypeError(f"empty integer list: {text!r}")
    return out


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _write_rows(rows: list[dict], fieldnames: list[str], fmt: str, out_path: str | None) -> None:
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _fmt(row.get(key, "")) for key in fieldnames})
        text = buffer.getvalue()
    else:
        native = []
        for row in rows:
            native.append(
                {
                    key: (
                        bool(v) if isinstance(v, (bool, np.bool_))
                        else int(v) if isinstance(v, (int, np.integer))
                        else float(v) if isinstance(v, (float, np.floating))
                        else v
                    )
                    for key, v in ((key, row.get(key, "")) for key in fieldnames)
                }
            )
        text = json.dumps(native, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spectrum_str(values: np.ndarray) -> str:
    return ";".join(format(float(v), ".12g") for v in values)


def cmd_prior(args) -> tuple[list[dict], list[str], list[dict]]:
    rows, violations = [], []
    critical = {tau: symspace.critical_n(tau) for tau in args.tau}
    for tau in args.tau:
        for n in args.n:
            rho = symspace.prior_density(tau, n)
            spectrum = symspace.eigendecompose(rho)
            entropy = symspace.shannon_entropy(np.clip(spectrum.eigenvalues, 0.0, None))
            loose = symspace.holevo_bound_loose(tau)
            n_c = critical[tau]
            rows.append(
                {
                    "tau": tau,
                    "n": n,
                    "entropy_bits": entropy,
                    "rank": spectrum.rank,
                    "n_critical": n_c if n_c is not None else "unresolved",
                    "at_or_above_critical": n_c is not None and n >= n_c,
                    "bound_loose_bits": loose,
                    "bound_tight_bits": symspace.holevo_bound_tight(tau),
                    "spectrum": _spectrum_str(spectrum.eigenvalues),
                }
            )
            if entropy > loose + 1e-9:
                violations.append(
                    {"check": "entropy-dimension-bound", "tau": tau, "n": n, "entropy": entropy, "bound": loose}
                )
    fields = [
        "tau", "n", "entropy_bits", "rank", "n_critical", "at_or_above_critical",
        "bound_loose_bits", "bound_tight_bits", "spectrum",
    ]
    return rows, fields, violations


def _figure1(args):
    rows, violations = [], []
    for T, events in sorted(FIGURE1_EVENTS.items()):
        for t0z in events:
            for t0x in range(T + 1):
                outcome = bayes.MeasurementOutcome(t0z, t0x)
                try:
                    post = bayes.posterior(outcome, T, args.n)
                except bayes.ImpossibleOutcomeError:
                    continue
                total = float(np.sum(post.probabilities))
                if abs(total - 1.0) > 1e-12:
                    violations.append(
                        {"check": "posterior-normalization", "T": T, "t0z": t0z, "t0x": t0x, "sum": total}
                    )
                for k, p in enumerate(post.probabilities):
                    rows.append({"T": T, "t0z": t0z, "t0x": t0x, "k": k, "posterior": float(p)})
    return rows, ["T", "t0z", "t0x", "k", "posterior"], violations


def _figure2(args):
    rows, violations = [], []
    for T in range(1, 9):
        copies = 2 * T
        gain = bayes.information_gain(T, args.n)
        bound = symspace.holevo_bound_tight(copies)
        gap = bound - gain
        rows.append(
            {
                "copies": copies,
                "prior_entropy_bits": float(args.n),
                "holevo_tight_bits": bound,
                "information_gain_bits": gain,
                "gap_bits": gap,
            }
        )
        if gap <= 0.0:
            violations.append({"check": "information-gain-below-bound", "copies": copies, "gap": gap})
    fields = ["copies", "prior_entropy_bits", "holevo_tight_bits", "information_gain_bits", "gap_bits"]
    return rows, fields, violations


def _figure3(args):
    rows = []
    for T in args.T:
        success = bayes.success_by_key(T, args.n)
        for k, p in enumerate(success):
            rows.append({"T": T, "k": k, "success": float(p)})
    return rows, ["T", "k", "success"], []


def _figure4(args):
    rows, violations = [], []
    for T in args.T:
        mean = bayes.mean_success(T, args.n)
        optimal = bayes.optimal_collective(T)
        row = {"T": T, "mean_success": mean, "optimal_collective": optimal, "upper_bound": ""}
        if T > 1:
            bound = bayes.bound_U(T)
            row["upper_bound"] = bound
            if mean > bound + 1e-9:
                violations.append({"check": "mean-success-bound", "T": T, "mean": mean, "bound": bound})
        if mean > optimal + 1e-9:
            violations.append({"check": "mean-below-optimal", "T": T, "mean": mean, "optimal": optimal})
        rows.append(row)
    return rows, ["T", "mean_success", "optimal_collective", "upper_bound"], violations


def _figure5(args):
    rows, violations = [], []
    for T in args.T:
        per_bit = bayes.mean_success(T, args.n)
        for s in range(1, args.s + 1):
            success = bayes.codeword_success(per_bit, s)
            bound = bayes.codeword_bound(T, s)
            rows.append({"T": T, "s": s, "success": success, "upper_bound": bound})
            if success > bound + 1e-10:
                violations.append({"check": "codeword-bound", "T": T, "s": s, "success": success, "bound": bound})
    return rows, ["T", "s", "success", "upper_bound"], violations


def cmd_figure(args) -> tuple[list[dict], list[str], list[dict]]:
    builders = {1: _figure1, 2: _figure2, 3: _figure3, 4: _figure4, 5: _figure5}
    if args.id not in builders:
        raise ValueError(f"figure id must be 1..5, got {args.id}")
    if args.T is None:
        args.T = {3: [2, 4, 8], 4: list(range(1, 11)), 5: [2, 4, 8]}.get(args.id)
    return builders[args.id](args)


def cmd_security(args) -> tuple[list[dict], list[str], list[dict]]:
    rows, violations = [], []
    for T in args.T:
        s_exact, s_simple = bayes.required_codeword_length(args.epsilon, T)
        forward = symmetry.forward_search_length(args.epsilon, T)
        ratio = s_simple / forward if forward else math.nan
        rows.append(
            {
                "epsilon": args.epsilon,
                "T": T,
                "s_exact": s_exact,
                "s_simple": s_simple,
                "forward_search": forward,
                "simple_to_forward_ratio": ratio,
            }
        )
        if s_simple < s_exact:
            violations.append({"check": "simple-dominates-exact", "T": T, "s_exact": s_exact, "s_simple": s_simple})
    fields = ["epsilon", "T", "s_exact", "s_simple", "forward_search", "simple_to_forward_ratio"]
    return rows, fields, violations


def cmd_montecarlo(args) -> tuple[list[dict], list[str], list[dict]]:
    if args.trials < 100:
        print(f"warning: {args.trials} trials gives a very coarse estimate", file=sys.stderr)
    params = ProtocolParams(n=args.n, N=max(args.N, args.s), T=args.T, s=args.s)
    cfg = montecarlo.TrialConfig(params=params, attack=args.attack, trials=args.trials, seed=args.seed)
    result = montecarlo.estimate(cfg)
    analytic = montecarlo.analytic_success(cfg)
    z = (result.mean - analytic) / result.std_error if result.std_error > 0 else 0.0
    rows = [
        {
            "attack": args.attack,
            "n": args.n,
            "T": args.T,
            "s": args.s,
            "trials": args.trials,
            "seed": args.seed,
            "empirical": result.mean,
            "std_error": result.std_error,
            "analytic": analytic,
            "z_score": z,
        }
    ]
    fields = ["attack", "n", "T", "s", "trials", "seed", "empirical", "std_error", "analytic", "z_score"]
    return rows, fields, []


def _check_roundtrip() -> tuple[bool, str]:
    import itertools

    checked = 0
    for n in (1, 2, 3):
        for s in (1, 2, 3):
            params = ProtocolParams(n=n, N=s, T=1, s=s)
            for key_values in itertools.product(range(1 << n), repeat=s):
                key = PrivateKey(key_values, n)
                for bits in itertools.product((0, 1), repeat=s):
                    codeword = Codeword(bits)
                    recovered, message = decrypt(encrypt(codeword, key), key, params)
                    if recovered != bits or message != codeword.parity:
                        return False, f"round-trip failed at n={n}, s={s}, key={key_values}, w={bits}"
                    checked += 1
    return True, f"{checked} round-trips exact"


def _check_parity_zeros() -> tuple[bool, str]:
    worst = 0.0
    for tau in (2, 4, 8, 16, 32):
        for n in (2, 6, 10, 14):
            matrix = symspace.prior_density(tau, n).matrix
            l = np.arange(tau + 1)
            odd = (l[:, None] + l[None, :]) % 2 == 1
            worst = max(worst, float(np.max(np.abs(matrix[odd]))))
    return worst < 1e-12, f"max |odd-parity entry| = {worst:.3e}"


def _check_binomial_spectrum() -> tuple[bool, str]:
    worst = 0.0
    for tau in (2, 4, 8, 16):
        n_c = symspace.critical_n(tau)
        if n_c is None:
            return False, f"critical resolution unresolved for tau={tau}"
        spectrum = symspace.eigendecompose(symspace.prior_density(tau, n_c))
        worst = max(worst, float(np.max(np.abs(spectrum.eigenvalues - symspace.binomial_spectrum(tau)))))
    return worst < 1e-10, f"max eigenvalue deviation = {worst:.3e}"


def _check_entropy_bounds() -> tuple[bool, str]:
    for tau in range(2, 65):
        n_c = symspace.critical_n(tau)
        if n_c is None:
            return False, f"critical resolution unresolved for tau={tau}"
        entropy = symspace.von_neumann_entropy(symspace.prior_density(tau, n_c))
        if entropy > symspace.holevo_bound_tight(tau) + 1e-9:
            return False, f"entropy above tight bound at tau={tau}"
        if entropy > symspace.holevo_bound_loose(tau) + 1e-9:
            return False, f"entropy above dimension bound at tau={tau}"
    return True, "entropy bounds hold for tau in [2, 64]"


def _check_information_gain() -> tuple[bool, str]:
    worst_gap = math.inf
    for T in range(1, 9):
        gap = symspace.holevo_bound_tight(2 * T) - bayes.information_gain(T, 10)
        worst_gap = min(worst_gap, gap)
    return worst_gap > 0.0, f"smallest bound-gain gap = {worst_gap:.6f} bits"


def _check_mean_success() -> tuple[bool, str]:
    worst = -math.inf
    for T in range(2, 11):
        excess = bayes.mean_success(T, 10) - bayes.bound_U(T)
        worst = max(worst, excess)
    return worst <= 1e-9, f"max excess over 1 - 1/(6T) = {worst:.3e}"


def _check_optimal_collective() -> tuple[bool, str]:
    for T in range(1, 11):
        if bayes.mean_success(T, 10) > bayes.optimal_collective(T) + 1e-9:
            return False, f"mean success above collective optimum at T={T}"
    return True, "individual attack stays below the collective optimum for T in [1, 10]"


def _check_codeword_bound() -> tuple[bool, str]:
    worst = -math.inf
    for T in (2, 4, 8):
        per_bit = bayes.mean_success(T, 10)
        for s in range(1, 51):
            excess = bayes.codeword_success(per_bit, s) - bayes.codeword_bound(T, s)
            worst = max(worst, excess)
    return worst <= 1e-9, f"max excess over the codeword bound = {worst:.3e}"


def _check_parity_identity() -> tuple[bool, str]:
    worst = 0.0
    for q1 in (0.5, 0.6, 0.75, 0.9, 1.0):
        for s in range(1, 13):
            closed = 0.5 + (2.0 * q1 - 1.0) ** s / 2.0
            worst = max(worst, abs(symmetry.parity_iteration(q1, s) - closed))
    return worst <= 1e-12, f"max iteration/closed-form deviation = {worst:.3e}"


def _check_forward_equivalence() -> tuple[bool, str]:
    for s in range(1, 65):
        if symmetry.forward_search_success(1, s) != symmetry.average_success_symmetry(s):
            return False, f"single-copy equivalence broken at s={s}"
    return True, "symmetry test matches single-copy forward search for s in [1, 64]"


def _check_factor_three() -> tuple[bool, str]:
    for exponent in range(3, 11):
        epsilon = 2.0 ** -exponent
        for T in range(2, 9):
            _, s_simple = bayes.required_codeword_length(epsilon, T)
            forward = symmetry.forward_search_length(epsilon, T)
            if abs(s_simple - 3 * forward) > 1:
                return False, f"length ratio far from 3 at epsilon=2^-{exponent}, T={T}"
    return True, "simple length bound is 3x the forward-search length (up to ceiling)"


def _check_bayes_normalization() -> tuple[bool, str]:
    T, n = 8, 10
    total_evidence = 0.0
    for t0z in range(T + 1):
        for t0x in range(T + 1):
            outcome = bayes.MeasurementOutcome(t0z, t0x)
            total_evidence += bayes.evidence(outcome, T, n)
            post = bayes.posterior(outcome, T, n)
            if abs(float(np.sum(post.probabilities)) - 1.0) > 1e-12:
                return False, f"posterior not normalized at {outcome}"
    if abs(total_evidence - 1.0) > 1e-10:
        return False, f"evidence grid sums to {total_evidence}"
    return True, "posteriors normalized; evidence grid sums to 1"


def _check_montecarlo(attack: str, trials: int, seed: int) -> tuple[bool, str]:
    if attack == "symmetry-test":
        params = ProtocolParams(n=10, N=8, T=1, s=8)
    else:
        params = ProtocolParams(n=10, N=1, T=4, s=1)
    cfg = montecarlo.TrialConfig(params=params, attack=attack, trials=trials, seed=seed)
    result = montecarlo.estimate(cfg)
    analytic = montecarlo.analytic_success(cfg)
    z = (result.mean - analytic) / result.std_error if result.std_error > 0 else 0.0
    return abs(z) < 3.0, f"z = {z:+.2f} against analytic {analytic:.6f} ({trials} trials)"


def cmd_check_all(args) -> tuple[list[dict], list[str], list[dict]]:
    checks = [
        ("protocol-roundtrip", _check_roundtrip),
        ("parity-zero-structure", _check_parity_zeros),
        ("binomial-spectrum", _check_binomial_spectrum),
        ("entropy-bounds", _check_entropy_bounds),
        ("information-gain-gap", _check_information_gain),
        ("mean-success-bound", _check_mean_success),
        ("optimal-collective", _check_optimal_collective),
        ("codeword-bound", _check_codeword_bound),
        ("parity-identity", _check_parity_identity),
        ("forward-equivalence", _check_forward_equivalence),
        ("factor-three", _check_factor_three),
        ("bayes-normalization", _check_bayes_normalization),
        ("mc-symmetry", lambda: _check_montecarlo("symmetry-test", args.trials, args.seed)),
        ("mc-bayes", lambda: _check_montecarlo("bayes-projective", args.trials, args.seed)),
    ]
    rows, violations = [], []
    for name, fn in checks:
        passed, detail = fn()
        rows.append({"check": name, "passed": passed, "detail": detail})
        if not passed:
            violations.append({"check": name, "detail": detail})
    return rows, ["check", "passed", "detail"], violations


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpke",
        description="Sweeps, preset result tables, and inequality checks for the rotation-based QPKE scheme.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p):
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("prior", help="entropy/rank/spectrum table of the repeated-copy density operator")
    p.add_argument("--tau", type=_parse_int_list, default=[1, 2, 4, 8, 16], help="copy counts, e.g. 2,4,8 or 1-16")
    p.add_argument("--n", type=_parse_int_list, default=[1, 2, 4, 8, 10], help="resolution exponents")
    add_output_flags(p)

    p = sub.add_parser("figure", help="data behind the preset analysis figures (ids 1-5)")
    p.add_argument("--id", type=int, required=True, help="1: posterior grids, 2: information gain, "
                   "3: success vs key, 4: success vs T, 5: success vs codeword length")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--T", type=_parse_int_list, default=None)
    p.add_argument("--s", type=int, default=50, help="maximum codeword length (figure 5)")
    add_output_flags(p)

    p = sub.add_parser("security", help="codeword lengths required for a target eavesdropping advantage")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--T", type=_parse_int_list, default=[2])
    add_output_flags(p)

    p = sub.add_parser("montecarlo", help="empirical attack success vs the analytic value")
    p.add_argument("--attack", choices=montecarlo.ATTACKS, required=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--T", type=int, default=4)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    add_output_flags(p)

    p = sub.add_parser("check-all", help="run the full inequality battery; exit 1 on any violation")
    p.add_argument("--trials", type=int, default=100_000, help="trials per Monte Carlo check")
    p.add_argument("--seed", type=int, default=0)
    add_output_flags(p)

    return parser


COMMANDS = {
    "prior": cmd_prior,
    "figure": cmd_figure,
    "security": cmd_security,
    "montecarlo": cmd_montecarlo,
    "check-all": cmd_check_all,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows, fields, violations = COMMANDS[args.command](args)
    except (ValueError, bayes.ImpossibleOutcomeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_rows(rows, fields, args.format, args.out)
    if violations:
        print(json.dumps({"violations": violations}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
