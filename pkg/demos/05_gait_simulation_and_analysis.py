"""Synthesizing gait pressure and detecting its phases back.

synthesize() generates the five-channel loading pattern of a normal stride
(heel strike, midfoot roll, forefoot push-off, swing); analyze() recovers
events and metrics from nothing but thresholded regional contact, and the
ground_truth() oracle says how well.
"""

from solesense.analysis import GaitEventKind, analyze
from solesense.synth import GaitParams, ground_truth, synthesize
from solesense.units import GaitPhase, SoleChannel

params = GaitParams(
    body_mass_kg=70.0, cadence_spm=120.0, stance_fraction=0.6,
    sample_rate_hz=100.0, cycles=12, noise_sigma_pa=2_000.0, seed=11,
)
samples = list(synthesize(params))
print(f"{len(samples)} samples over {params.cycles} cycles"
      f" of {params.cycle_duration_s:.1f} s at {params.sample_rate_hz:.0f} Hz\n")

print("one cycle of the heel / midfoot / forefoot envelopes (every 50 ms):")
print(f"{'t [s]':>6} {'heel [kPa]':>11} {'mid [kPa]':>10} {'fore [kPa]':>11}")
for sample in samples[0:100:5]:
    print(f"{sample.timestamp:>6.2f} {sample.value(SoleChannel.HEEL) / 1000:>11.1f}"
          f" {sample.value(SoleChannel.MIDFOOT_CENTRAL) / 1000:>10.1f}"
          f" {sample.value(SoleChannel.FOREFOOT) / 1000:>11.1f}")

events, report = analyze(samples)
print("\ndetected gait report:")
print(f"  completed cycles: {report.cycles}")
print(f"  cadence: {report.cadence_spm:.2f} steps/min (configured {params.cadence_spm:.0f})")
print(f"  stance fraction: {report.stance_fraction_mean:.3f} +/- {report.stance_fraction_std:.3f}"
      f" (configured {params.stance_fraction})")
print(f"  sequence violations: {report.sequence_violations}")
print("  mean phase durations [ms]:")
for phase, duration in report.phase_mean_durations_s.items():
    print(f"    {phase.value:<17} {duration * 1000:7.1f}")

truth = ground_truth(params)
first_strikes = [e for e in events if e.kind == GaitEventKind.HEEL_STRIKE][:3]
truth_starts = [r.start_s for r in truth if r.phase == GaitPhase.INITIAL_CONTACT][:3]
print("\nfirst heel strikes vs the oracle:")
for event, expected in zip(first_strikes, truth_starts):
    print(f"  detected {event.timestamp:.3f} s, truth {expected:.3f} s"
          f" (error {abs(event.timestamp - expected) * 1000:.0f} ms)")
