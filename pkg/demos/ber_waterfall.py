"""Monte-Carlo BER waterfall for the conventional QPSK chain.

Runs the full modem (framing, sync, CFO, frequency-domain equalization)
over an AWGN channel and prints the measured bit error rate next to the
closed-form QPSK prediction at each Eb/N0 point.
"""

import math

from mslink.harness import (ExperimentConfig, run_ber_sweep,
                            theoretical_qpsk_ber)

EBN0_DB = (2.0, 4.0, 6.0, 8.0, 10.0)
FRAMES = 10  # 368,640 bits per point; raise for tighter statistics


def main():
    es_over_eb_db = 10 * math.log10(2)  # 2 bits per QPSK symbol
    cfg = ExperimentConfig(
        snr_list=tuple(e + es_over_eb_db for e in EBN0_DB),
        frames_per_point=FRAMES, base_seed=0)
    records = run_ber_sweep(cfg)

    print("Eb/N0_dB       bits   errors    measured_BER      theory_BER")
    for eb, rec in zip(EBN0_DB, records):
        print(f"{eb:8.1f}  {rec.bits_simulated:9d}  {rec.bit_errors:7d}"
              f"  {rec.ber:14.3e}  {theoretical_qpsk_ber(eb):14.3e}")


if __name__ == "__main__":
    main()
