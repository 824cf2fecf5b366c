"""Minimal EDF reader/writer.

Only continuous EDF is handled: 16-bit little-endian samples, fixed-width
ASCII headers. EDF+ annotation signals are dropped from the output.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_TARGET_RATE = 256.0
ANNOTATION_LABEL = "EDF Annotations"

_SIGNAL_FIELDS = (
    ("label", 16),
    ("transducer", 80),
    ("physical_dimension", 8),
    ("physical_min", 8),
    ("physical_max", 8),
    ("digital_min", 8),
    ("digital_max", 8),
    ("prefiltering", 80),
    ("samples_per_record", 8),
    ("reserved", 32),
)


class EDFError(ValueError):
    pass


@dataclass
class Recording:
    patient_id: str
    session_id: str
    sample_rate_hz: float
    channel_labels: list[str]
    signals: np.ndarray  # (channels, samples), microvolts
    duration_s: float = field(init=False)

    def __post_init__(self):
        self.signals = np.asarray(self.signals, dtype=np.float64)
        if self.signals.ndim != 2:
            raise ValueError("signals must be channels x samples")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if len(self.channel_labels) != self.signals.shape[0]:
            raise ValueError("one label per channel required")
        if len(set(self.channel_labels)) != len(self.channel_labels):
            raise ValueError("channel labels must be unique")
        self.duration_s = self.signals.shape[1] / self.sample_rate_hz

    @property
    def n_samples(self) -> int:
        return self.signals.shape[1]


@dataclass
class SignalHeader:
    label: str
    physical_min: float
    physical_max: float
    digital_min: int
    digital_max: int
    samples_per_record: int
    physical_dimension: str = "uV"

    @property
    def gain(self) -> float:
        return (self.physical_max - self.physical_min) / (self.digital_max - self.digital_min)

    def to_physical(self, digital: np.ndarray) -> np.ndarray:
        return self.physical_min + (digital.astype(np.float64) - self.digital_min) * self.gain


@dataclass
class EDFHeader:
    n_records: int
    record_duration_s: float
    signals: list[SignalHeader]
    header_bytes: int
    patient: str = ""
    recording: str = ""

    @property
    def record_samples(self) -> int:
        return sum(s.samples_per_record for s in self.signals)

    @property
    def duration_s(self) -> float:
        return self.n_records * self.record_duration_s


def _field(raw: bytes, what: str) -> str:
    try:
        return raw.decode("ascii").strip()
    except UnicodeDecodeError:
        raise EDFError(f"non-ASCII header field {what}") from None


def _number(raw: bytes, what: str, kind=float):
    text = _field(raw, what)
    try:
        return kind(text) if kind is float else int(float(text))
    except ValueError:
        raise EDFError(f"non-numeric header field {what}: {text!r}") from None


def parse_header(data: bytes) -> EDFHeader:
    if len(data) < 256:
        raise EDFError("truncated: fixed header shorter than 256 bytes")
    header_bytes = _number(data[184:192], "header bytes", int)
    n_records = _number(data[236:244], "number of data records", int)
    record_duration = _number(data[244:252], "data record duration")
    ns = _number(data[252:256], "number of signals", int)
    if ns <= 0:
        raise EDFError("zero signals")
    if len(data) < 256 + 256 * ns:
        raise EDFError("truncated: signal headers incomplete")

    columns: dict[str, list[bytes]] = {}
    pos = 256
    for name, width in _SIGNAL_FIELDS:
        columns[name] = [data[pos + i * width: pos + (i + 1) * width] for i in range(ns)]
        pos += width * ns

    signals = []
    for i in range(ns):
        sig = SignalHeader(
            label=_field(columns["label"][i], "label"),
            physical_dimension=_field(columns["physical_dimension"][i], "physical dimension"),
            physical_min=_number(columns["physical_min"][i], "physical minimum"),
            physical_max=_number(columns["physical_max"][i], "physical maximum"),
            digital_min=_number(columns["digital_min"][i], "digital minimum", int),
            digital_max=_number(columns["digital_max"][i], "digital maximum", int),
            samples_per_record=_number(columns["samples_per_record"][i], "samples per record", int),
        )
        if sig.digital_max == sig.digital_min:
            raise EDFError(f"degenerate scaling on {sig.label!r}: digital_min == digital_max")
        if sig.samples_per_record <= 0:
            raise EDFError(f"non-positive samples per record on {sig.label!r}")
        signals.append(sig)

    if header_bytes != 256 * (ns + 1):
        logger.warning("header byte count %d disagrees with %d signals", header_bytes, ns)
        header_bytes = 256 * (ns + 1)
    if record_duration <= 0:
        raise EDFError("non-positive data record duration")

    return EDFHeader(
        n_records=n_records,
        record_duration_s=record_duration,
        signals=signals,
        header_bytes=header_bytes,
        patient=_field(data[8:88], "patient"),
        recording=_field(data[88:168], "recording"),
    )


def resample_linear(x: np.ndarray, rate_in: float, rate_out: float, n_out: int) -> np.ndarray:
    if rate_in == rate_out and x.shape[-1] == n_out:
        return x
    t_in = np.arange(x.shape[-1]) / rate_in
    t_out = np.arange(n_out) / rate_out
    return np.interp(t_out, t_in, x)


def parse_edf(data: bytes, target_rate: float | None = DEFAULT_TARGET_RATE,
              patient_id: str = "", session_id: str = "") -> Recording:
    """Decode an EDF byte stream into a Recording in physical units.

    Every kept signal is linearly interpolated onto ``target_rate``; pass
    ``None`` to keep native rates (they must then agree across signals).
    """
    header = parse_header(data)
    record_bytes = 2 * header.record_samples
    body = len(data) - header.header_bytes
    n_records = header.n_records
    if n_records < 0:
        if body % record_bytes:
            raise EDFError("truncated: partial data record")
        n_records = body // record_bytes
    elif body < n_records * record_bytes:
        raise EDFError(f"truncated: expected {n_records} records, found {body / record_bytes:.2f}")
    header.n_records = n_records

    raw = np.frombuffer(data, dtype="<i2", count=n_records * header.record_samples,
                        offset=header.header_bytes).reshape(n_records, header.record_samples)

    keep = [i for i, s in enumerate(header.signals) if s.label != ANNOTATION_LABEL]
    if not keep:
        raise EDFError("zero signals")
    offsets = np.concatenate([[0], np.cumsum([s.samples_per_record for s in header.signals])])
    rates = {header.signals[i].samples_per_record / header.record_duration_s for i in keep}
    if target_rate is None:
        if len(rates) > 1:
            raise EDFError("mixed sample rates; give a target rate")
        rate = rates.pop()
    else:
        rate = float(target_rate)
    n_out = int(round(header.duration_s * rate))

    labels, rows = [], []
    for i in keep:
        sig = header.signals[i]
        digital = raw[:, offsets[i]:offsets[i + 1]].reshape(-1)
        phys = sig.to_physical(digital)
        rows.append(resample_linear(phys, sig.samples_per_record / header.record_duration_s, rate, n_out))
        labels.append(sig.label)
    return Recording(patient_id, session_id, rate, labels, np.vstack(rows))


def _ascii(value, width: int) -> bytes:
    text = value if isinstance(value, str) else _format_number(value, width)
    raw = text.encode("ascii")
    if len(raw) > width:
        raise EDFError(f"header value {text!r} wider than {width}")
    return raw.ljust(width)


def _format_number(value, width: int) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    text = repr(float(value))
    if text.endswith(".0"):
        text = text[:-2]
    if len(text) > width:
        text = f"{value:.{max(width - 6, 1)}g}"
    return text


def _fit_bound(value: float, up: bool, width: int = 8) -> str:
    """Shortest decimal text of ``value`` rounded outward to fit ``width``."""
    for decimals in range(6, -1, -1):
        step = 10.0 ** -decimals
        v = (np.ceil if up else np.floor)(value / step) * step
        text = f"{v:.{decimals}f}"
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        if text == "-0":
            text = "0"
        if len(text) <= width:
            return text
    raise EDFError(f"physical bound {value!r} does not fit in {width} characters")


def write_edf(rec: Recording, physical_range: tuple[float, float] | None = None,
              record_duration_s: float = 1.0) -> bytes:
    """Encode a Recording as EDF bytes (one shared sample rate, int16 data).

    The physical range defaults to each channel's own min/max. Trailing
    samples that do not fill a whole data record are dropped.
    """
    spr = rec.sample_rate_hz * record_duration_s
    if abs(spr - round(spr)) > 1e-9:
        raise EDFError("record duration must hold an integer number of samples")
    spr = int(round(spr))
    n_records = rec.n_samples // spr
    ns = len(rec.channel_labels)
    dmin, dmax = -32768, 32767

    pmins, pmaxs = [], []
    for row in rec.signals:
        lo, hi = physical_range if physical_range else (float(row.min()), float(row.max()))
        if hi <= lo:
            lo, hi = lo - 1.0, hi + 1.0
        pmins.append(_fit_bound(lo, up=False))
        pmaxs.append(_fit_bound(hi, up=True))

    head = b"".join([
        _ascii("0", 8),
        _ascii(rec.patient_id or "X", 80),
        _ascii(rec.session_id or "X", 80),
        _ascii("01.01.00", 8),
        _ascii("00.00.00", 8),
        _ascii(256 * (ns + 1), 8),
        _ascii("", 44),
        _ascii(n_records, 8),
        _ascii(record_duration_s, 8),
        _ascii(ns, 4),
    ])
    per_signal = {
        "label": [_ascii(lbl, 16) for lbl in rec.channel_labels],
        "transducer": [_ascii("", 80)] * ns,
        "physical_dimension": [_ascii("uV", 8)] * ns,
        "physical_min": [_ascii(v, 8) for v in pmins],
        "physical_max": [_ascii(v, 8) for v in pmaxs],
        "digital_min": [_ascii(dmin, 8)] * ns,
        "digital_max": [_ascii(dmax, 8)] * ns,
        "prefiltering": [_ascii("", 80)] * ns,
        "samples_per_record": [_ascii(spr, 8)] * ns,
        "reserved": [_ascii("", 32)] * ns,
    }
    head += b"".join(b"".join(per_signal[name]) for name, _ in _SIGNAL_FIELDS)

    # the written header text is what a reader sees; quantize against it
    digital = np.empty((ns, n_records * spr), dtype="<i2")
    for i, row in enumerate(rec.signals):
        lo = float(per_signal["physical_min"][i])
        hi = float(per_signal["physical_max"][i])
        scaled = (row[: n_records * spr] - lo) * (dmax - dmin) / (hi - lo) + dmin
        digital[i] = np.clip(np.round(scaled), dmin, dmax)
    body = digital.reshape(ns, n_records, spr).transpose(1, 0, 2).tobytes()
    return head + body


def read_header(path) -> EDFHeader:
    """Header of an EDF file without loading the data records."""
    with open(path, "rb") as f:
        fixed = f.read(256)
        if len(fixed) < 256:
            raise EDFError("truncated: fixed header shorter than 256 bytes")
        ns = _number(fixed[252:256], "number of signals", int)
        head = fixed + f.read(256 * max(ns, 0))
        header = parse_header(head)
        if header.n_records < 0:
            f.seek(0, 2)
            header.n_records = (f.tell() - header.header_bytes) // (2 * header.record_samples)
    return header
