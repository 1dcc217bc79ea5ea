"""Uplink massive-MIMO link-level simulator for OFDM without cyclic prefix.

Modules
-------
numerics    unitary DFT, linear convolution, small dense solves
channel     PDP models, channel sampling, uplink application, Toeplitz models
ofdm        CP-less / CP-based modulation and windowed demodulation
equalizers  MRC, frequency-domain ZF, TR-MRC, TR-ZF post-equalization
analysis    closed-form asymptotic SIR of conventional MRC
montecarlo  exact signal/ICI/ISI/MUI/noise decomposition, SINR/BER sweeps
cli         command-line entry point and CSV emission
"""

__version__ = "0.1.0"
