# vakrata.progress

import sys
from contextlib import contextmanager

import click

try:
    from tqdm import tqdm as _tqdm
except ModuleNotFoundError:
    _tqdm = None

BAR_FORMAT = "{l_bar}{bar}| {n_fmt}/{total_fmt} • {rate_fmt}{postfix}"


class _Silent:
    def update(self, n: int = 1) -> None:
        pass


@contextmanager
def progress(total: int, desc: str, enabled: bool = True):
    """A progress bar on stderr: tqdm when available, click otherwise."""
    if not enabled:
        yield _Silent()
    elif _tqdm:
        bar = _tqdm(total=total, desc=desc, unit="pt", file=sys.stderr,
                    bar_format=BAR_FORMAT, colour="green", leave=False)
        try:
            yield bar
        finally:
            bar.close()
    else:
        with click.progressbar(length=total, label=desc, file=sys.stderr) as bar:
            yield bar
