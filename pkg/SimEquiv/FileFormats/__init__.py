from FileFormats.Images import read_pgm, write_phase_png, write_pgm
from FileFormats.Manifest import RunManifest, read_manifest, write_manifest
from FileFormats.Spectra import read_spectrum, write_spectrum

__all__ = [
    "read_pgm", "write_pgm", "write_phase_png",
    "RunManifest", "read_manifest", "write_manifest",
    "read_spectrum", "write_spectrum",
]
