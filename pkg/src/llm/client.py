"""Completion clients: a recorded transcript for replay, or a live chat-completion endpoint."""
from __future__ import annotations

import asyncio
import json
import logging
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import httpx
from tenacity import AsyncRetrying, retry_if_exception_type, stop_after_attempt, wait_exponential

from ..config import LlmConfig
from ..errors import CompletionError, EndpointError, MissingReplayEntryError
from .prompts import PromptDoc

logger = logging.getLogger(__name__)

SYSTEM_MESSAGE = "You are a helpful assistant."


@dataclass(frozen=True)
class TranscriptRecord:
    digest: str
    label: str
    prompt: str
    response: str
    recorded_at: str


def read_transcript(path: Path) -> dict[str, TranscriptRecord]:
    """Records keyed by digest; a later record for the same digest wins."""
    records: dict[str, TranscriptRecord] = {}
    if not path.exists():
        return records
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = TranscriptRecord(**json.loads(line))
        except (json.JSONDecodeError, TypeError) as e:
            raise CompletionError(f"{path}:{n}: bad transcript record ({e})") from e
        records[rec.digest] = rec
    return records


class CompletionClient(ABC):
    """Turns a prompt into response text."""

    mode: str

    @abstractmethod
    async def complete(self, prompt: PromptDoc) -> str:
        """Return the response text for ``prompt``.

        Raises:
            CompletionError: no response could be obtained
        """

    async def aclose(self) -> None:
        return None


class ReplayClient(CompletionClient):
    mode = "replay"

    def __init__(self, transcript: Path):
        self.transcript = transcript
        self._records = read_transcript(transcript)
        logger.debug("replay transcript %s: %d records", transcript, len(self._records))

    def __len__(self) -> int:
        return len(self._records)

    async def complete(self, prompt: PromptDoc) -> str:
        digest = prompt.inputs_digest
        record = self._records.get(digest)
        if record is None:
            raise MissingReplayEntryError(digest, prompt.label)
        return record.response


class LiveClient(CompletionClient):
    """OpenAI-compatible ``/chat/completions`` client that records every answer."""

    mode = "live"

    def __init__(
        self,
        config: LlmConfig,
        transcript: Path | None = None,
        http: httpx.AsyncClient | None = None,
    ):
        self.config = config
        self.transcript = transcript
        self._http = http or httpx.AsyncClient(timeout=config.timeout_sec)
        self._lock = asyncio.Lock()

    async def aclose(self) -> None:
        await self._http.aclose()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        return headers

    async def _post(self, prompt: PromptDoc) -> str:
        resp = await self._http.post(
            f"{self.config.base_url.rstrip('/')}/chat/completions",
            headers=self._headers(),
            json={
                "model": self.config.model,
                "messages": [
                    {"role": "system", "content": SYSTEM_MESSAGE},
                    {"role": "user", "content": prompt.text},
                ],
                "temperature": self.config.temperature,
            },
            timeout=self.config.timeout_sec,
        )
        resp.raise_for_status()
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise EndpointError(f"unexpected completion payload: {resp.text[:200]}") from e

    async def complete(self, prompt: PromptDoc) -> str:
        try:
            async for attempt in AsyncRetrying(
                stop=stop_after_attempt(self.config.max_retries),
                wait=wait_exponential(multiplier=self.config.backoff_sec, max=30),
                retry=retry_if_exception_type(httpx.HTTPError),
                reraise=True,
            ):
                with attempt:
                    n = attempt.retry_state.attempt_number
                    if n > 1:
                        logger.warning("retrying %s prompt (attempt %d)", prompt.label, n)
                    text = await self._post(prompt)
        except httpx.HTTPError as e:
            raise EndpointError(
                f"{self.config.base_url}: failed after {self.config.max_retries} attempt(s): {e}"
            ) from e
        await self._record(prompt, text)
        return text

    async def _record(self, prompt: PromptDoc, response: str) -> None:
        if self.transcript is None:
            return
        record = TranscriptRecord(
            digest=prompt.inputs_digest,
            label=prompt.label,
            prompt=prompt.text,
            response=response,
            recorded_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        async with self._lock:
            self.transcript.parent.mkdir(parents=True, exist_ok=True)
            with self.transcript.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(asdict(record), ensure_ascii=False) + "\n")
        logger.info("recorded %s completion to %s", prompt.label, self.transcript)


async def complete(prompt: PromptDoc, client: CompletionClient) -> str:
    """Run one prompt through ``client``.

    Raises:
        MissingReplayEntryError: replay transcript has no record for the prompt
        EndpointError: live endpoint still failing after the configured retries
    """
    text = await client.complete(prompt)
    logger.debug("%s completion via %s: %d chars", prompt.label, client.mode, len(text))
    return text
