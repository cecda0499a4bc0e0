import random
import socket
import threading
import time

import pytest

from solesense.acquisition import DividerConfig, counts_to_sample
from solesense.sensor import measured_profile
from solesense.synth import GaitParams, synthesize
from solesense.telemetry import (
    CRC_SPAN,
    FRAME_LENGTH,
    MAGIC,
    BadCrc,
    BadMagic,
    BadVersion,
    Collector,
    Deframer,
    Emitter,
    TelemetryFrame,
    Truncated,
    crc16_ccitt_false,
    decode,
    encode,
    frames_from_samples,
)

PROFILE = measured_profile()
DIVIDER = DividerConfig()


def _random_frame(rng):
    return TelemetryFrame(
        device_id=rng.randrange(256),
        sequence=rng.randrange(1 << 32),
        timestamp_ms=rng.randrange(1 << 48),
        counts=tuple(rng.randrange(1 << 16) for _ in range(5)),
    )


class TestCodec:
    def test_crc_check_vector(self):
        assert crc16_ccitt_false(b"123456789") == 0x29B1

    def test_frame_layout(self):
        frame = TelemetryFrame(1, 0, 0, (0, 1, 2, 3, 4))
        wire = encode(frame)
        assert len(wire) == FRAME_LENGTH == 26
        assert wire[:2] == MAGIC == b"\x53\x4c"
        assert wire[2] == 1  # version

    def test_roundtrip_random_frames(self):
        rng = random.Random(2024)
        for _ in range(1000):
            frame = _random_frame(rng)
            assert decode(encode(frame)) == frame

    def test_every_single_bit_flip_detected(self):
        frame = TelemetryFrame(3, 1234, 56789, (100, 200, 300, 400, 4095))
        wire = bytearray(encode(frame))
        for bit in range(CRC_SPAN * 8):  # 192 payload bits
            corrupted = bytearray(wire)
            corrupted[bit // 8] ^= 1 << (bit % 8)
            with pytest.raises((BadCrc, BadMagic, BadVersion)):
                decode(bytes(corrupted))

    def test_error_offsets(self):
        frame_bytes = encode(TelemetryFrame(1, 1, 1, (1, 1, 1, 1, 1)))
        with pytest.raises(Truncated) as err:
            decode(frame_bytes[:10])
        assert err.value.offset == 0
        with pytest.raises(BadMagic) as err:
            decode(b"XX" + frame_bytes[2:])
        assert err.value.offset == 0
        bad_version = bytearray(frame_bytes)
        bad_version[2] = 9
        with pytest.raises(BadVersion) as err:
            decode(bytes(bad_version))
        assert err.value.offset == 2
        bad_crc = bytearray(frame_bytes)
        bad_crc[20] ^= 0xFF
        with pytest.raises(BadCrc):
            decode(bytes(bad_crc))

    def test_field_validation(self):
        with pytest.raises(ValueError):
            TelemetryFrame(256, 0, 0, (0, 0, 0, 0, 0))
        with pytest.raises(ValueError):
            TelemetryFrame(0, 1 << 32, 0, (0, 0, 0, 0, 0))
        with pytest.raises(ValueError):
            TelemetryFrame(0, 0, 1 << 48, (0, 0, 0, 0, 0))
        with pytest.raises(ValueError):
            TelemetryFrame(0, 0, 0, (0, 0, 0, 0))


class TestDeframer:
    def test_clean_stream(self):
        rng = random.Random(1)
        frames = [_random_frame(rng) for _ in range(20)]
        wire = b"".join(encode(f) for f in frames)
        deframer = Deframer()
        assert deframer.feed(wire) == frames
        assert deframer.error_count == 0

    def test_resync_with_junk_between_frames(self):
        rng = random.Random(2)
        frames = [_random_frame(rng) for _ in range(30)]
        wire = bytearray()
        for frame in frames:
            wire += bytes(rng.randrange(256) for _ in range(rng.randint(0, 8)))
            wire += encode(frame)
        deframer = Deframer()
        got = deframer.feed(bytes(wire))
        assert got == frames

    def test_corrupted_frames_counted_and_skipped(self):
        rng = random.Random(3)
        frames = [_random_frame(rng) for _ in range(10)]
        chunks = []
        for i, frame in enumerate(frames):
            wire = bytearray(encode(frame))
            if i in (2, 5, 7):
                wire[15] ^= 0x01  # flip one payload bit
            chunks.append(bytes(wire))
        deframer = Deframer()
        got = deframer.feed(b"".join(chunks))
        assert len(got) == 7
        assert deframer.error_count == 3

    def test_incremental_feeding(self):
        rng = random.Random(4)
        frames = [_random_frame(rng) for _ in range(15)]
        wire = b"".join(encode(f) for f in frames)
        deframer = Deframer()
        got = []
        for i in range(0, len(wire), 7):  # deliberately frame-misaligned chunks
            got.extend(deframer.feed(wire[i : i + 7]))
        assert got == frames


class _MemoryTransport:
    def __init__(self):
        self.buffer = bytearray()
        self.closed = False

    def sendall(self, data):
        self.buffer.extend(data)

    def close(self):
        self.closed = True


class TestEmitter:
    def _samples(self, n):
        params = GaitParams(body_mass_kg=70, cycles=1, sample_rate_hz=100)
        return list(synthesize(params))[:n]

    def test_sequences_count_up_from_zero(self):
        transport = _MemoryTransport()
        emitter = Emitter(lambda: transport, PROFILE, DIVIDER)
        sent = emitter.run(self._samples(100))
        assert sent == 100
        frames = Deframer().feed(bytes(transport.buffer))
        assert [f.sequence for f in frames] == list(range(100))

    def test_sequence_continues_after_reconnect(self):
        transports = []

        class _FlakyOnce(_MemoryTransport):
            def sendall(self, data):
                if len(transports) == 1 and len(self.buffer) >= 50 * FRAME_LENGTH:
                    raise ConnectionResetError("link dropped")
                super().sendall(data)

        def connect():
            transports.append(_FlakyOnce())
            return transports[-1]

        sleeps = []
        emitter = Emitter(connect, PROFILE, DIVIDER, sleep=sleeps.append)
        emitter.run(self._samples(100))
        frames = []
        for transport in transports:
            frames.extend(Deframer().feed(bytes(transport.buffer)))
        # frame 50 failed on the first link and was retried on the second:
        # numbering continues with no gap
        assert [f.sequence for f in frames] == list(range(100))
        assert emitter.retries == 1

    def test_connect_backoff_doubles_to_cap(self):
        attempts = []
        transport = _MemoryTransport()

        def connect():
            attempts.append(None)
            if len(attempts) <= 8:
                raise ConnectionRefusedError
            return transport

        sleeps = []
        emitter = Emitter(connect, PROFILE, DIVIDER, sleep=sleeps.append)
        emitter.run(self._samples(1))
        assert sleeps == [0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 5.0, 5.0]

    def test_pace_sleeps_by_timestamp_deltas(self):
        transport = _MemoryTransport()
        sleeps = []
        emitter = Emitter(lambda: transport, PROFILE, DIVIDER, pace=True, sleep=sleeps.append)
        emitter.run(self._samples(5))
        assert sleeps == pytest.approx([0.01, 0.01, 0.01, 0.01])

    def test_frames_from_samples_pure(self):
        samples = self._samples(10)
        frames = list(frames_from_samples(samples, PROFILE, DIVIDER, device_id=9))
        assert [f.sequence for f in frames] == list(range(10))
        assert all(f.device_id == 9 for f in frames)
        assert frames[3].timestamp_ms == round(samples[3].timestamp * 1000)


class _ListSink:
    def __init__(self):
        self.samples = {}
        self.lock = threading.Lock()

    def __call__(self, device_id, sample):
        with self.lock:
            self.samples.setdefault(device_id, []).append(sample)


class TestCollector:
    def _start(self, sink):
        collector = Collector(sink, PROFILE, DIVIDER, host="127.0.0.1", port=0)
        collector.start()
        return collector

    def test_two_devices_stream_concurrently(self):
        sink = _ListSink()
        collector = self._start(sink)
        host, port = collector.address
        params = GaitParams(body_mass_kg=70, cycles=2, sample_rate_hz=100)
        samples = list(synthesize(params))

        def stream(device_id):
            emitter = Emitter(
                lambda: socket.create_connection((host, port), timeout=5),
                PROFILE,
                DIVIDER,
                device_id=device_id,
            )
            emitter.run(samples)
            emitter.close()

        threads = [threading.Thread(target=stream, args=(d,)) for d in (1, 2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        deadline = time.monotonic() + 10.0
        while time.monotonic() < deadline:
            with sink.lock:
                if all(len(sink.samples.get(d, [])) == len(samples) for d in (1, 2)):
                    break
            time.sleep(0.02)
        collector.stop()

        for device in (1, 2):
            got = sink.samples[device]
            assert len(got) == len(samples)
            stamps = [s.timestamp for s in got]
            assert stamps == sorted(stamps)  # per-device arrival order preserved
            assert collector.stats[device].frames == len(samples)
            assert collector.stats[device].gaps == 0

    def test_empty_connection(self):
        sink = _ListSink()
        collector = self._start(sink)
        host, port = collector.address
        conn = socket.create_connection((host, port), timeout=5)
        conn.close()
        assert collector.connection_closed.wait(timeout=5.0)
        collector.stop()
        assert sink.samples == {}
        assert all(s.decode_errors == 0 for s in collector.stats.values())

    def test_corruption_counted_and_survivors_recovered(self):
        sink = _ListSink()
        collector = self._start(sink)
        host, port = collector.address
        params = GaitParams(body_mass_kg=70, cycles=1, sample_rate_hz=100)
        frames = list(frames_from_samples(synthesize(params), PROFILE, DIVIDER))
        wire = bytearray()
        for i, frame in enumerate(frames):
            encoded = bytearray(encode(frame))
            if i in (10, 20, 30):
                encoded[16] ^= 0x02
            wire += encoded
        conn = socket.create_connection((host, port), timeout=5)
        conn.sendall(bytes(wire))
        conn.close()
        assert collector.connection_closed.wait(timeout=5.0)
        collector.stop()
        got = sink.samples[frames[0].device_id]
        assert len(got) == len(frames) - 3
        stats = collector.stats[frames[0].device_id]
        assert stats.decode_errors == 3
        assert stats.gaps == 3  # the corrupted sequence numbers never arrived

    def test_end_to_end_conservation_in_memory(self):
        # lossless transport: collector output equals the acquisition
        # round-trip of the emitter input, sample for sample
        params = GaitParams(body_mass_kg=70, cycles=2, sample_rate_hz=100)
        samples = list(synthesize(params))
        frames = list(frames_from_samples(samples, PROFILE, DIVIDER))
        wire = b"".join(encode(f) for f in frames)
        out = [
            counts_to_sample(f.timestamp_ms / 1000.0, f.counts, PROFILE, DIVIDER)
            for f in Deframer().feed(wire)
        ]
        assert len(out) == len(samples)
        for sample, frame, decoded in zip(samples, frames, out):
            assert decoded.timestamp == sample.timestamp
            expected = counts_to_sample(sample.timestamp, frame.counts, PROFILE, DIVIDER)
            assert decoded.as_row() == expected.as_row()
