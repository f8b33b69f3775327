from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 1024


def chunked_map(fn, rows: np.ndarray, threads: int = 1, chunk: int = CHUNK) -> np.ndarray:
    """Apply ``fn`` to consecutive row blocks and concatenate the results.

    Inputs are fixed before dispatch, so the output does not depend on
    ``threads``.
    """
    blocks = [rows[i : i + chunk] for i in range(0, len(rows), chunk)]
    if threads <= 1 or len(blocks) == 1:
        return np.concatenate([fn(b) for b in blocks])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.concatenate(list(pool.map(fn, blocks)))
