from collections import deque
from concurrent.futures import Future, ThreadPoolExecutor
import queue
import threading
import time
from typing import Any, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from src.framework.logging import get_logger
from src.spectral.core import RgbImage, SpectralCube
from src.spectral.errors import FrameError, ShapeMismatch
from src.spectral.estimators import EstimationModel, estimate_cube
from .frames import ArrayFrameSource, FrameSource, normalize_rgb
from .skip import SkipPolicy
from .stats import PipelineStats

logger = get_logger(__name__)

DEFAULT_QUEUE_SIZE = 4
_DONE = object()


class PipelineResult(NamedTuple):
    frames: Optional[List[SpectralCube]]
    stats: PipelineStats


class _Decoder(threading.Thread):
    """Reads and normalises frames into a bounded queue"""

    def __init__(self, source: FrameSource, out: 'queue.Queue', stop: threading.Event):
        super().__init__(name='spectral-decode', daemon=True)
        self.source = source
        self.out = out
        self.stop = stop

    def _put(self, item: Any) -> bool:
        while not self.stop.is_set():
            try:
                self.out.put(item, timeout=0.1)
                return True
            except queue.Full:
                continue
        return False

    def run(self):
        index = 0
        try:
            for raw in self.source:
                try:
                    image = normalize_rgb(raw, self.source.bit_depth)
                except Exception as e:
                    self._put((index, FrameError(index, e)))
                    return
                if not self._put((index, image)):
                    return
                index += 1
        except Exception as e:
            self._put((index, FrameError(index, e)))
            return
        self._put(_DONE)


def _timed_estimate(model: EstimationModel, image: RgbImage) -> Tuple[SpectralCube, float]:
    started = time.perf_counter()
    cube = estimate_cube(model, image)
    return cube, 1000.0 * (time.perf_counter() - started)


def process_video(
    frames,
    model: EstimationModel,
    skip: SkipPolicy = SkipPolicy(),
    sink=None,
    threads: int = 1,
    queue_size: int = DEFAULT_QUEUE_SIZE,
    frame_delay_ms: float = 0.0,
) -> PipelineResult:
    """Estimate a spectral frame for every input frame, in input order

    ``frames`` is a FrameSource or an iterable of 8-bit arrays. Output goes to
    ``sink.write(cube)`` when a sink is given, otherwise it is collected and
    returned. A frame whose similarity to the last estimated frame reaches the
    skip threshold re-emits the previous spectral frame.
    """
    model.require_fitted()
    source = frames if isinstance(frames, FrameSource) else ArrayFrameSource(frames)
    queue_size = max(1, queue_size)
    threads = max(1, threads)

    stats = PipelineStats()
    collected: Optional[List[SpectralCube]] = [] if sink is None else None
    decoded: 'queue.Queue' = queue.Queue(maxsize=queue_size)
    stop = threading.Event()
    decoder = _Decoder(source, decoded, stop)
    # (frame index, future of an estimated frame, or None for a skipped one)
    pending: deque = deque()
    previous: Optional[SpectralCube] = None
    last_estimated: Optional[RgbImage] = None
    shape = None

    def emit_front() -> None:
        nonlocal previous
        index, future = pending.popleft()
        if future is None:
            cube = previous
            stats.frames_skipped += 1
            logger.debug(f"Frame {index} skipped")
        else:
            try:
                cube, elapsed_ms = future.result()
            except Exception as e:
                raise FrameError(index, e) from e
            stats.frames_estimated += 1
            stats.per_frame_ms.append(elapsed_ms)
        previous = cube
        if sink is None:
            collected.append(cube)
        else:
            sink.write(cube)
        if frame_delay_ms > 0:
            time.sleep(frame_delay_ms / 1000.0)

    started = time.perf_counter()
    decoder.start()
    try:
        with ThreadPoolExecutor(max_workers=threads, thread_name_prefix='spectral-estimate') as pool:
            while True:
                item = decoded.get()
                if item is _DONE:
                    break
                index, image = item
                if isinstance(image, FrameError):
                    raise image
                if shape is None:
                    shape = image.shape
                elif image.shape != shape:
                    raise FrameError(index, ShapeMismatch(f"Frame is {image.shape}, expected {shape}"))
                stats.frames_in += 1

                if skip.should_skip(image, last_estimated):
                    pending.append((index, None))
                else:
                    last_estimated = image
                    pending.append((index, pool.submit(_timed_estimate, model, image)))

                while len(pending) > threads + queue_size or (pending and _ready(pending[0][1])):
                    emit_front()
            while pending:
                emit_front()
    except FrameError as e:
        logger.error(f"Spectral video generation failed at frame {e.frame_index}: {e.cause}", exc_info=True)
        raise
    except Exception as e:
        logger.error(f"Spectral video generation failed: {e}", exc_info=True)
        raise
    finally:
        stop.set()
        for _, future in pending:
            if future is not None:
                future.cancel()
        decoder.join(timeout=5.0)

    stats.wall_seconds = time.perf_counter() - started
    logger.info(
        f"Processed {stats.frames_in} frame(s): {stats.frames_estimated} estimated, "
        f"{stats.frames_skipped} skipped, {stats.throughput_fps:.2f} fps"
    )
    return PipelineResult(collected, stats)


def _ready(future: Optional[Future]) -> bool:
    return future is None or future.done()


def estimate_frames(frames: Iterable[np.ndarray], model: EstimationModel, **options) -> List[SpectralCube]:
    """Convenience wrapper returning the estimated frames of an in-memory video"""
    return process_video(frames, model, **options).frames
