"""Line-oriented certificates for low-weight codewords.

A certificate lists the code parameters, the M-columns and C-runs that make
up the codeword, the claimed weight and the support, so the claim can be
re-checked with nothing but the alist file:

    ldpc-forge certificate
    n 2048
    m 1024
    r 3
    k 2
    t 57
    m_columns 3 17 25
    run 5 9 5 4          (i j start len, one line per run)
    weight 37
    support 5 6 7 8 ...
"""

import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from ldpcForge.codes import bounds
from ldpcForge.codes.code_model import BitVector, StructuredCode, run_support, syndrome
from ldpcForge.codes.errors import MalformedCertificate
from ldpcForge.codes.search import SearchResult

MAGIC = "ldpc-forge certificate"
SCALAR_FIELDS = ("n", "m", "r", "k", "t")


class Certificate(BaseModel):
    """Parsed content of a certificate file."""
    n: int
    m: int
    r: int
    k: int = Field(..., ge=0)
    t: int = Field(..., ge=0)
    m_columns: List[int] = Field(default_factory=list)
    runs: List[Tuple[int, int, int, int]] = Field(default_factory=list, description="(i, j, start, length)")
    weight: int
    support: List[int] = Field(default_factory=list)

    @classmethod
    def from_result(cls, result: SearchResult) -> "Certificate":
        return cls(
            n=result.params.n,
            m=result.params.m,
            r=result.params.r,
            k=result.k,
            t=result.t,
            m_columns=list(result.m_column_set),
            runs=[tuple(run) for run in result.c_runs],
            weight=result.weight,
            support=result.codeword.support(),
        )

    def to_text(self) -> str:
        lines = [MAGIC]
        lines += [f"{name} {getattr(self, name)}" for name in SCALAR_FIELDS]
        lines.append(" ".join(["m_columns"] + [str(c) for c in self.m_columns]))
        lines += [f"run {i} {j} {start} {length}" for i, j, start, length in self.runs]
        lines.append(f"weight {self.weight}")
        lines.append(" ".join(["support"] + [str(s) for s in self.support]))
        return "\n".join(lines) + "\n"


def write_certificate(result: Union[SearchResult, Certificate], path: Union[str, Path]) -> Certificate:
    cert = result if isinstance(result, Certificate) else Certificate.from_result(result)
    with open(path, 'w', newline='\n') as f:
        f.write(cert.to_text())
    logging.info(f"[certificate] wrote weight-{cert.weight} certificate to {path}")
    return cert


def read_certificate(path: Union[str, Path]) -> Certificate:
    """Parse a certificate file.

    Raises:
        MalformedCertificate: with the number of the offending line
    """
    with open(path, 'r') as f:
        lines = f.read().split("\n")
    if not lines or lines[0].strip() != MAGIC:
        raise MalformedCertificate(f"first line must be {MAGIC!r}", 1)
    fields = {"runs": []}
    for no, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if not tokens:
            continue
        key, rest = tokens[0], tokens[1:]
        try:
            values = [int(tok) for tok in rest]
        except ValueError:
            raise MalformedCertificate(f"expected integers after {key!r}", no)
        if key in SCALAR_FIELDS or key == "weight":
            if len(values) != 1:
                raise MalformedCertificate(f"{key!r} takes exactly one value", no)
            if key in fields:
                raise MalformedCertificate(f"{key!r} given twice", no)
            fields[key] = values[0]
        elif key in ("m_columns", "support"):
            if key in fields:
                raise MalformedCertificate(f"{key!r} given twice", no)
            fields[key] = values
        elif key == "run":
            if len(values) != 4:
                raise MalformedCertificate("a run needs i j start len", no)
            fields["runs"].append(tuple(values))
        else:
            raise MalformedCertificate(f"unknown field {key!r}", no)
    missing = [name for name in SCALAR_FIELDS + ("weight", "m_columns", "support") if name not in fields]
    if missing:
        raise MalformedCertificate(f"missing fields: {', '.join(missing)}", len(lines))
    return Certificate(**fields)


def certificate_word(code: StructuredCode, cert: Certificate) -> BitVector:
    """Rebuild the codeword from the certificate's M-columns and C-runs."""
    bits = np.zeros(code.n, dtype=np.uint8)
    for col in cert.m_columns:
        bits[code.m + col] ^= 1
    for _, _, start, length in cert.runs:
        bits[(start + np.arange(length)) % code.m] ^= 1
    return BitVector.from_bits(bits)


def verify_certificate(code: StructuredCode, cert: Certificate) -> Optional[str]:
    """Re-check a certificate against a code.

    Returns:
        None if every check passes, otherwise the name of the first failed check.
    """
    if (cert.n, cert.m, cert.r) != (code.n, code.m, code.r):
        return "parameter mismatch"
    n_cols = code.n - code.m
    if any(not 0 <= c < n_cols for c in cert.m_columns) or len(set(cert.m_columns)) != len(cert.m_columns):
        return "bad column index"
    if any(not 0 <= start < code.m or not 0 < length < code.m for _, _, start, length in cert.runs):
        return "bad run"
    word = certificate_word(code, cert)
    if not syndrome(code, word).is_zero():
        return "syndrome nonzero"
    if word.is_zero():
        return "zero codeword"
    if any(run_support(start, length, code.m) != frozenset((i, j)) for i, j, start, length in cert.runs):
        return "run endpoints mismatch"
    weight = word.weight()
    if cert.weight != weight:
        return "weight mismatch"
    if sorted(cert.support) != word.support():
        return "support mismatch"
    if weight > bounds.weight_bound(cert.t, cert.k, code.r):
        return "bound exceeded"
    return None
