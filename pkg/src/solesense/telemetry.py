"""Binary telemetry link: frame codec, device-side emitter, collector server.

Wire format (26 bytes, little-endian multi-byte integers):

    offset  size  field
    0       2     magic 0x53 0x4C ("SL")
    2       1     version (= 1)
    3       1     device id
    4       4     sequence number, u32
    8       6     timestamp, u48 milliseconds since session epoch
    14      10    five u16 ADC counts in canonical channel order
    24      2     CRC-16/CCITT-FALSE over bytes 0..23

The CRC is poly 0x1021, init 0xFFFF, no reflection, no xor-out; its check
value over the ASCII bytes "123456789" is 0x29B1.

Transport is TCP (lab-scale, reliability first); sequence numbers still
travel so reconnect gaps are visible and a datagram mode stays possible. The
collector resynchronizes on the magic after any decode error by scanning one
byte at a time, so junk between frames never costs an intact frame.
"""

from __future__ import annotations

import socket
import struct
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime
from typing import Callable, Iterable, Iterator

from .acquisition import DividerConfig, counts_to_sample, sample_to_counts
from .sensor import CalibrationProfile
from .units import PressureSample

MAGIC = b"SL"
PROTOCOL_VERSION = 1
FRAME_LENGTH = 26
CRC_SPAN = 24  # bytes covered by the CRC
TIMESTAMP_MAX_MS = (1 << 48) - 1
DEFAULT_PORT = 7332
ADDR_ENV_VAR = "SOLESENSE_ADDR"

_CRC_TABLE = []
for _byte in range(256):
    _crc = _byte << 8
    for _ in range(8):
        _crc = ((_crc << 1) ^ 0x1021 if _crc & 0x8000 else _crc << 1) & 0xFFFF
    _CRC_TABLE.append(_crc)


def crc16_ccitt_false(data: bytes) -> int:
    crc = 0xFFFF
    for byte in data:
        crc = ((crc << 8) & 0xFFFF) ^ _CRC_TABLE[(crc >> 8) ^ byte]
    return crc


class FrameError(ValueError):
    """Base decode error; ``offset`` is the byte offset the error refers to."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class BadMagic(FrameError):
    pass


class BadVersion(FrameError):
    pass


class BadCrc(FrameError):
    pass


class Truncated(FrameError):
    pass


@dataclass(frozen=True)
class TelemetryFrame:
    device_id: int
    sequence: int
    timestamp_ms: int
    counts: tuple[int, int, int, int, int]
    version: int = PROTOCOL_VERSION

    def __post_init__(self) -> None:
        if not 0 <= self.device_id <= 0xFF:
            raise ValueError(f"device_id out of range: {self.device_id!r}")
        if not 0 <= self.sequence <= 0xFFFFFFFF:
            raise ValueError(f"sequence out of range: {self.sequence!r}")
        if not 0 <= self.timestamp_ms <= TIMESTAMP_MAX_MS:
            raise ValueError(f"timestamp_ms out of range: {self.timestamp_ms!r}")
        if len(self.counts) != 5 or any(not 0 <= c <= 0xFFFF for c in self.counts):
            raise ValueError(f"counts must be five u16 values, got {self.counts!r}")


def encode(frame: TelemetryFrame) -> bytes:
    body = (
        MAGIC
        + struct.pack("<BB", frame.version, frame.device_id)
        + struct.pack("<I", frame.sequence)
        + frame.timestamp_ms.to_bytes(6, "little")
        + struct.pack("<5H", *frame.counts)
    )
    return body + struct.pack("<H", crc16_ccitt_false(body))


def decode(data: bytes, offset: int = 0) -> TelemetryFrame:
    """Decode one frame starting at ``offset``; validates magic, version, CRC."""
    if len(data) - offset < FRAME_LENGTH:
        raise Truncated(
            f"need {FRAME_LENGTH} bytes, have {len(data) - offset}", offset
        )
    view = bytes(data[offset : offset + FRAME_LENGTH])
    if view[:2] != MAGIC:
        raise BadMagic(f"bad magic {view[:2]!r}", offset)
    if view[2] != PROTOCOL_VERSION:
        raise BadVersion(f"unsupported version {view[2]}", offset + 2)
    (crc_wire,) = struct.unpack_from("<H", view, CRC_SPAN)
    crc_calc = crc16_ccitt_false(view[:CRC_SPAN])
    if crc_wire != crc_calc:
        raise BadCrc(f"crc mismatch: wire {crc_wire:#06x} != {crc_calc:#06x}", offset)
    device_id = view[3]
    (sequence,) = struct.unpack_from("<I", view, 4)
    timestamp_ms = int.from_bytes(view[8:14], "little")
    counts = struct.unpack_from("<5H", view, 14)
    return TelemetryFrame(device_id, sequence, timestamp_ms, counts)


@dataclass
class Deframer:
    """Incremental frame extractor with one-byte resynchronization.

    Bytes that do not start a valid frame are skipped one at a time, so any
    number of junk bytes between frames never costs an intact frame. A
    truncated tail is kept for the next feed().
    """

    frames: int = 0
    bad_crc: int = 0
    bad_version: int = 0
    skipped_bytes: int = 0
    _buffer: bytearray = field(default_factory=bytearray)

    @property
    def error_count(self) -> int:
        return self.bad_crc + self.bad_version

    def feed(self, data: bytes) -> list[TelemetryFrame]:
        self._buffer.extend(data)
        frames: list[TelemetryFrame] = []
        pos = 0
        while True:
            try:
                frame = decode(self._buffer, pos)
            except Truncated:
                break
            except BadMagic:
                pos += 1
                self.skipped_bytes += 1
                continue
            except BadVersion:
                pos += 1
                self.bad_version += 1
                continue
            except BadCrc:
                pos += 1
                self.bad_crc += 1
                continue
            self.frames += 1
            pos += FRAME_LENGTH
            frames.append(frame)
        del self._buffer[:pos]
        return frames


@dataclass(frozen=True)
class SessionHeader:
    """Session metadata; written to files, never transmitted on the wire."""

    device_id: int
    epoch: str  # RFC 3339 / ISO-8601 UTC wall-clock of sample time zero
    profile_name: str
    sample_rate_hz: float
    divider: DividerConfig = DividerConfig()

    def __post_init__(self) -> None:
        try:
            datetime.fromisoformat(self.epoch.replace("Z", "+00:00"))
        except ValueError:
            raise ValueError(f"epoch must be an RFC 3339 timestamp, got {self.epoch!r}") from None


def frames_from_samples(
    samples: Iterable[PressureSample],
    profile: CalibrationProfile,
    divider: DividerConfig = DividerConfig(),
    device_id: int = 1,
    start_sequence: int = 0,
) -> Iterator[TelemetryFrame]:
    """Pure sample -> frame conversion; sequence increments by one per sample."""
    sequence = start_sequence
    for sample in samples:
        yield TelemetryFrame(
            device_id=device_id,
            sequence=sequence,
            timestamp_ms=round(sample.timestamp * 1000.0),
            counts=sample_to_counts(sample, profile, divider),
        )
        sequence += 1


class Emitter:
    """Device-side sender: one frame per sample over a (re)connecting transport.

    ``connect`` returns anything with sendall()/close(). On transport failure
    the emitter reconnects with exponential backoff (base 100 ms, cap 5 s) and
    retries the failed frame, so sequence numbering continues across
    reconnects. Delivery is at-least-once: a send that died mid-flight is
    retried, and any frames the transport had buffered but never delivered
    show up at the receiver as sequence gaps.
    """

    def __init__(
        self,
        connect: Callable[[], object],
        profile: CalibrationProfile,
        divider: DividerConfig = DividerConfig(),
        device_id: int = 1,
        pace: bool = False,
        backoff_base_s: float = 0.1,
        backoff_cap_s: float = 5.0,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self._connect = connect
        self._profile = profile
        self._divider = divider
        self._device_id = device_id
        self._pace = pace
        self._backoff_base = backoff_base_s
        self._backoff_cap = backoff_cap_s
        self._sleep = sleep
        self._conn = None
        self.sent = 0
        self.retries = 0

    def _ensure_connected(self) -> None:
        backoff = self._backoff_base
        while self._conn is None:
            try:
                self._conn = self._connect()
            except OSError:
                self._sleep(backoff)
                backoff = min(backoff * 2.0, self._backoff_cap)

    def run(self, samples: Iterable[PressureSample]) -> int:
        """Send every sample; returns the number of frames delivered."""
        previous_t = None
        sequence = 0
        for sample in samples:
            if self._pace and previous_t is not None:
                delta = sample.timestamp - previous_t
                if delta > 0:
                    self._sleep(delta)
            previous_t = sample.timestamp
            frame = TelemetryFrame(
                device_id=self._device_id,
                sequence=sequence,
                timestamp_ms=round(sample.timestamp * 1000.0),
                counts=sample_to_counts(sample, self._profile, self._divider),
            )
            sequence += 1
            payload = encode(frame)
            while True:
                self._ensure_connected()
                try:
                    self._conn.sendall(payload)
                    self.sent += 1
                    break
                except OSError:
                    try:
                        self._conn.close()
                    except OSError:
                        pass
                    self._conn = None
                    self.retries += 1
        return self.sent

    def close(self) -> None:
        if self._conn is not None:
            try:
                self._conn.close()
            except OSError:
                pass
            self._conn = None


@dataclass
class DeviceStats:
    frames: int = 0
    gaps: int = 0
    decode_errors: int = 0


class Collector:
    """TCP server ingesting frames from any number of devices.

    Each connection gets its own sequential pipeline (deframe, convert counts
    to pressures, forward to the sink in arrival order); a slow sink only
    stalls its own connection. Decode errors are counted and skipped, never
    fatal. ``sink`` is called as sink(device_id, PressureSample).
    """

    def __init__(
        self,
        sink: Callable[[int, PressureSample], None],
        profile: CalibrationProfile,
        divider: DividerConfig = DividerConfig(),
        host: str = "127.0.0.1",
        port: int = DEFAULT_PORT,
    ):
        self._sink = sink
        self._profile = profile
        self._divider = divider
        self._host = host
        self._port = port
        self._server: socket.socket | None = None
        self._accept_thread: threading.Thread | None = None
        self._workers: list[threading.Thread] = []
        self._stopping = threading.Event()
        self._lock = threading.Lock()
        self.stats: dict[int, DeviceStats] = {}
        self.connections_closed = 0
        self.connection_closed = threading.Event()

    @property
    def address(self) -> tuple[str, int]:
        if self._server is None:
            raise RuntimeError("collector not started")
        return self._server.getsockname()[:2]

    def start(self) -> None:
        server = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        server.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        server.bind((self._host, self._port))
        server.listen()
        self._server = server
        self._accept_thread = threading.Thread(target=self._accept_loop, daemon=True)
        self._accept_thread.start()

    def _accept_loop(self) -> None:
        while not self._stopping.is_set():
            try:
                conn, _addr = self._server.accept()
            except OSError:
                return  # listener closed
            worker = threading.Thread(target=self._serve, args=(conn,), daemon=True)
            with self._lock:
                self._workers.append(worker)
            worker.start()

    def _serve(self, conn: socket.socket) -> None:
        deframer = Deframer()
        expected: dict[int, int] = {}
        try:
            while not self._stopping.is_set():
                try:
                    chunk = conn.recv(4096)
                except OSError:
                    break
                if not chunk:
                    break
                for frame in deframer.feed(chunk):
                    stats = self._device_stats(frame.device_id)
                    want = expected.get(frame.device_id)
                    if want is not None and frame.sequence > want:
                        stats.gaps += frame.sequence - want
                    expected[frame.device_id] = frame.sequence + 1
                    try:
                        sample = counts_to_sample(
                            frame.timestamp_ms / 1000.0, frame.counts, self._profile, self._divider
                        )
                    except ValueError:
                        # CRC-valid but semantically bad (e.g. counts beyond
                        # the ADC range): count it, never kill the connection
                        stats.decode_errors += 1
                        continue
                    stats.frames += 1
                    self._sink(frame.device_id, sample)
        finally:
            # connection-level decode errors land on the device(s) seen on it,
            # or device 0 if the stream never produced a valid frame
            errors = deframer.error_count
            if errors:
                device = next(iter(expected), 0)
                self._device_stats(device).decode_errors += errors
            try:
                conn.close()
            except OSError:
                pass
            self.connections_closed += 1
            self.connection_closed.set()

    def _device_stats(self, device_id: int) -> DeviceStats:
        with self._lock:
            if device_id not in self.stats:
                self.stats[device_id] = DeviceStats()
            return self.stats[device_id]

    def stop(self) -> None:
        self._stopping.set()
        if self._server is not None:
            try:
                self._server.close()
            except OSError:
                pass
        if self._accept_thread is not None:
            self._accept_thread.join(timeout=5.0)
        with self._lock:
            workers = list(self._workers)
        for worker in workers:
            worker.join(timeout=5.0)
