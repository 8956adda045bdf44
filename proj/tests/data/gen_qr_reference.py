"""Regenerates qr_reference.txt with the `qrcode` package (pip install qrcode).

Each line: version level pinned_mask applied_mask payload_hex matrix_bits
(row-major, dark=1). "auto" means the encoder picked the mask itself.
"""
import qrcode
from qrcode.util import QRData, MODE_8BIT_BYTE

LEVELS = {
    "L": qrcode.constants.ERROR_CORRECT_L,
    "M": qrcode.constants.ERROR_CORRECT_M,
    "Q": qrcode.constants.ERROR_CORRECT_Q,
    "H": qrcode.constants.ERROR_CORRECT_H,
}

CASES = [
    (b"HELLO", 1, "L", 0),
    (b"HELLO", 1, "L", None),
    (bytes(range(7)), 2, "M", None),
    (bytes(range(7)), 4, "H", None),
    (bytes(range(7)), 4, "L", None),
    (b"cambench-v3q", 3, "Q", 3),
    (bytes(range(40, 118)), 4, "L", 6),
]


def build(payload, version, level, mask):
    kwargs = dict(version=version, error_correction=LEVELS[level], border=0)
    if mask is not None:
        kwargs["mask_pattern"] = mask
    q = qrcode.QRCode(**kwargs)
    q.add_data(QRData(payload, MODE_8BIT_BYTE))
    q.make(fit=False)
    return q


with open("qr_reference.txt", "w") as out:
    for payload, version, level, mask in CASES:
        q = build(payload, version, level, mask)
        applied = q.mask_pattern if mask is not None else q.best_mask_pattern()
        q = build(payload, version, level, applied)
        bits = "".join("".join("1" if v else "0" for v in row) for row in q.get_matrix())
        pinned = "auto" if mask is None else str(mask)
        out.write(f"{version} {level} {pinned} {applied} {payload.hex()} {bits}\n")
