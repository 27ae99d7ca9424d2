"""Command-line front end for ldpcForge.

    ldpc-forge gen --n 2048 --m 1024 --r 3 --seed 7 --out code.alist
    ldpc-forge search code.alist --k 2 --t auto --budget 100000 --out code.cert
    ldpc-forge verify code.alist code.cert
    ldpc-forge sweep --r 3 --k 0 --k 2 --n-min 4096 --n-max 65536 --out sweep.csv
    ldpc-forge bounds --r 3 --k 1 --m 1000000
    ldpc-forge encode code.alist --random --seed 3

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 no result,
4 runtime failure.
"""

import functools
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

import click
import numpy as np
import pandas as pd
from pydantic import ValidationError

from ldpcForge.codes import bounds, experiments
from ldpcForge.codes.code_model import BitVector, sample_code, validate_params
from ldpcForge.codes.encoder import code_dimension, encode, parity_obstruction
from ldpcForge.codes.errors import (
    InvalidParams,
    LdpcForgeError,
    LengthMismatch,
    MalformedAlist,
    MalformedCertificate,
    ParityObstruction,
)
from ldpcForge.codes.models import BOUND_CSV_HEADER, RowPolicy, SearchConfig, SweepConfig
from ldpcForge.codes.search import resolve_t, search_min_weight
from ldpcForge.utils.alist import read_alist, write_alist
from ldpcForge.utils.certificate import read_certificate, verify_certificate, write_certificate

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_NO_RESULT = 3
EXIT_RUNTIME_FAILURE = 4

THREADS_ENV = "LDPC_FORGE_THREADS"
MAX_PRINTED_DIMENSION = 24
MAX_MESSAGE_DRAWS = 100

INPUT_ERRORS = (InvalidParams, MalformedAlist, MalformedCertificate, LengthMismatch, ParityObstruction,
                ValidationError)


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def handle_errors(func):
    """Map library errors onto the documented exit codes."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except INPUT_ERRORS as e:
            _fail(str(e), EXIT_INVALID_INPUT)
        except (LdpcForgeError, OSError) as e:
            logging.error(f"[cli] {type(e).__name__}: {str(e)}")
            _fail(str(e), EXIT_INVALID_INPUT if isinstance(e, (ValueError, OSError)) else EXIT_RUNTIME_FAILURE)
    return wrapper


threads_option = click.option(
    "--threads", type=click.IntRange(min=1), default=1, show_default=True, envvar=THREADS_ENV,
    help=f"Chain worker threads; defaults to ${THREADS_ENV}. 1 is deterministic.",
)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log progress at DEBUG level to stderr.")
def main(verbose: bool):
    """Structured LDPC codes: sampling, encoding and certified low-weight codeword search."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
        force=True,
    )


@main.command("gen")
@click.option("--n", "n", type=int, required=True, help="Blocklength.")
@click.option("--m", "m", type=int, required=True, help="Number of parity checks.")
@click.option("--r", "r", type=int, default=3, show_default=True, help="Column weight of M.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--row-policy", type=click.Choice([p.value for p in RowPolicy]), default=RowPolicy.ANY_NON_ZERO.value,
              show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default="code.alist", show_default=True)
@handle_errors
def cmd_gen(n: int, m: int, r: int, seed: int, row_policy: str, out_path: str):
    """Sample an (n, m, r)-structured code and write it as an alist file."""
    params = validate_params(n, m, r)
    code = sample_code(params, RowPolicy(row_policy), seed)
    write_alist(code, out_path)
    click.echo(f"wrote ({n}, {m}, {r}) code to {out_path}")
    # the dimension is at least n-m, so larger codes are never printed
    if n - m <= MAX_PRINTED_DIMENSION:
        dim = code_dimension(code)
        if dim <= MAX_PRINTED_DIMENSION:
            click.echo(f"dimension {dim}")


def _parse_t(value: str) -> int:
    if value == "auto":
        return 0
    try:
        t = int(value)
    except ValueError:
        raise click.BadParameter(f"expected a positive integer or 'auto', got {value!r}")
    if t < 1:
        raise click.BadParameter(f"t must be positive, got {t}")
    return t


@main.command("search")
@click.argument("alist_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", "k", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--t", "t", default="auto", show_default=True, help="Tolerance, or 'auto' for the bound-driven choice.")
@click.option("--budget", type=click.IntRange(min=1), default=100_000, show_default=True, help="Chains to sample.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bucket-offsets", type=click.IntRange(min=1), default=2, show_default=True)
@threads_option
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Certificate path; defaults to ALIST_PATH with a .cert suffix.")
@handle_errors
def cmd_search(alist_path: str, k: int, t: str, budget: int, seed: int, bucket_offsets: int, threads: int,
               out_path: Optional[str]):
    """Search a code for a certified low-weight codeword.

    Prints "n m r k t found_weight bound chains_used seconds".
    """
    code = read_alist(alist_path)
    config = SearchConfig(k=k, t=_parse_t(t), max_chains=budget, seed=seed,
                          bucket_offsets=bucket_offsets, threads=threads)
    t_used = resolve_t(code, config)
    if config.t == 0:
        click.echo(f"auto t = {t_used}")
    started = time.perf_counter()
    result = search_min_weight(code, config)
    seconds = time.perf_counter() - started
    bound = bounds.weight_bound(t_used, k, code.r)
    if result is None:
        click.echo(f"{code.n} {code.m} {code.r} {k} {t_used} - {bound} {budget} {seconds:.3f}")
        _fail(f"no collision within {budget} chains", EXIT_NO_RESULT)
    cert_path = out_path or str(Path(alist_path).with_suffix(".cert"))
    write_certificate(result, cert_path)
    click.echo(
        f"{code.n} {code.m} {code.r} {k} {t_used} {result.weight} {bound} {result.chains_used} {seconds:.3f}"
    )


@main.command("verify")
@click.argument("alist_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("certificate_path", type=click.Path(exists=True, dir_okay=False))
@handle_errors
def cmd_verify(alist_path: str, certificate_path: str):
    """Independently re-check a certificate against a code."""
    code = read_alist(alist_path)
    cert = read_certificate(certificate_path)
    failed = verify_certificate(code, cert)
    if failed is not None:
        _fail(failed, EXIT_VERIFY_FAILED)
    click.echo(f"ok: weight {cert.weight} codeword")


@main.command("sweep")
@click.option("--r", "r", type=int, default=3, show_default=True)
@click.option("--k", "k_list", type=click.IntRange(min=0), multiple=True, default=(0,), show_default=True)
@click.option("--n", "n_list", type=int, multiple=True, help="Explicit blocklengths; overrides --n-min/--n-max.")
@click.option("--n-min", type=int, default=4096, show_default=True)
@click.option("--n-max", type=int, default=65536, show_default=True)
@click.option("--seeds", "seeds_per_point", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option("--rate", type=float, default=0.5, show_default=True, help="m = ceil(rate * n).")
@click.option("--base-seed", type=int, default=0, show_default=True)
@threads_option
@click.option("--out", "out_csv", type=click.Path(dir_okay=False), default="sweep.csv", show_default=True)
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), default=None, help="Optional scatter plot.")
@handle_errors
def cmd_sweep(r: int, k_list: List[int], n_list: List[int], n_min: int, n_max: int, seeds_per_point: int,
              budget: int, rate: float, base_seed: int, threads: int, out_csv: str, svg_path: Optional[str]):
    """Run the search over a geometric grid of blocklengths and fit log-log slopes."""
    n_grid = list(n_list) if n_list else experiments.geometric_grid(n_min, n_max)
    config = SweepConfig(r=r, k_list=list(k_list), n_grid=n_grid, seeds_per_point=seeds_per_point,
                         budget=budget, rate=rate, base_seed=base_seed, threads=threads)
    rows = experiments.run_sweep(config, out_csv)
    click.echo(f"wrote {len(rows)} rows to {out_csv}")
    if rows.empty:
        return
    summary = experiments.summarize(rows)
    click.echo(summary.to_string(index=False, na_rep="-", float_format=lambda x: f"{x:g}"))
    slopes = experiments.fit_slopes(rows)
    click.echo(slopes.to_string(index=False, na_rep="-", float_format=lambda x: f"{x:.4f}"))
    for message in experiments.direction_violations(rows):
        logging.warning(f"[sweep] {message}")
        click.echo(f"warning: {message}", err=True)
    violations = experiments.bound_violations(rows)
    if not violations.empty:
        logging.error(f"[sweep] {len(violations)} rows exceed their bound")
        click.echo(f"{len(violations)} rows exceed their bound", err=True)
    if svg_path:
        experiments.plot_sweep(rows, svg_path)
        click.echo(f"wrote plot to {svg_path}")
    if not violations.empty:
        sys.exit(EXIT_VERIFY_FAILED)


@main.command("bounds")
@click.option("--r", "r", type=int, default=3, show_default=True)
@click.option("--k", "k_list", type=click.IntRange(min=0), multiple=True, default=(0,), show_default=True)
@click.option("--m", "m_grid", type=click.IntRange(min=1), multiple=True, help="One or more m values.")
@click.option("--n", "n", type=int, default=None, help="Blocklength; defaults to 2m.")
@click.option("--best-k", type=click.IntRange(min=0), default=None, help="Add the row of the best k <= BEST_K.")
@click.option("--out", "out_csv", type=click.Path(dir_okay=False), default=None, help="CSV path; stdout if omitted.")
@handle_errors
def cmd_bounds(r: int, k_list: List[int], m_grid: List[int], n: Optional[int], best_k: Optional[int],
               out_csv: Optional[str]):
    """Evaluate the closed-form bounds, one CSV row per (r, k, m)."""
    if r < 3:
        raise InvalidParams(f"column weight r must be at least 3, got r={r}", "r >= 3")
    rows = []
    for m in m_grid:
        ks = list(dict.fromkeys(k_list))
        if best_k is not None:
            k_opt = bounds.optimal_k(m, r, best_k)
            if k_opt not in ks:
                ks.append(k_opt)
        for k in ks:
            rows.append(bounds.bound_report(m, r, k, n).to_csv_row())
    frame = pd.DataFrame(rows, columns=BOUND_CSV_HEADER)
    if out_csv:
        frame.to_csv(out_csv, index=False, lineterminator="\n")
    else:
        click.echo(frame.to_csv(index=False, lineterminator="\n"), nl=False)


def _read_message(path: str, length: int) -> BitVector:
    with open(path, 'r') as f:
        text = "".join(f.read().split())
    if any(ch not in "01" for ch in text):
        raise LengthMismatch("message file must contain only 0 and 1")
    if len(text) != length:
        raise LengthMismatch(f"message has length {len(text)}, expected n-m={length}")
    return BitVector.from_bits([int(ch) for ch in text])


@main.command("encode")
@click.argument("alist_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--message", "message_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="File holding n-m bits as 0/1 characters.")
@click.option("--random", "use_random", is_flag=True, help="Encode a random message with even M-parity.")
@click.option("--seed", type=int, default=0, show_default=True)
@handle_errors
def cmd_encode(alist_path: str, message_path: Optional[str], use_random: bool, seed: int):
    """Encode a message and print the codeword as a 0/1 line."""
    code = read_alist(alist_path)
    length = code.n - code.m
    if message_path is None and not use_random:
        raise click.UsageError("give --message PATH or --random")
    if message_path is not None:
        message = _read_message(message_path, length)
    else:
        rng = np.random.default_rng(seed)
        for _ in range(MAX_MESSAGE_DRAWS):
            message = BitVector.from_bits(rng.integers(0, 2, size=length, dtype=np.uint8))
            if not parity_obstruction(code, message):
                break
        else:
            raise ParityObstruction(f"no admissible message in {MAX_MESSAGE_DRAWS} draws")
    word = encode(code, message)
    click.echo("".join(str(int(b)) for b in word.to_bits()))


if __name__ == "__main__":
    main()
