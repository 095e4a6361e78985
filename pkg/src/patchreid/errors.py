class PatchReidError(Exception):
    """Base class for all patchreid errors."""


class DataError(PatchReidError):
    """Invalid or unusable input data: files, masks, manifests, schemas."""
