"""Model providers: deterministic fixture replay and a chat-completions client.

The mock provider makes the whole pipeline reproducible: every completion is
looked up from a JSONL fixture file keyed by (sentence_id, prompt_kind,
attempt), so repeated runs are byte-identical. The HTTP provider speaks the
common chat-completions wire format and reads its key from GAZEGRAPH_API_KEY.
"""

from __future__ import annotations

import json
import os
import threading
from typing import Protocol

import requests

from .model import GazeGraphError
from .prompts import PromptRequest

API_KEY_ENV = "GAZEGRAPH_API_KEY"


class ProviderError(GazeGraphError):
    """The provider could not produce a completion for this attempt."""


class FixtureMissingError(ProviderError):
    def __init__(self, sentence_id: str, prompt_kind: str, attempt: int):
        super().__init__(f"no fixture for ({sentence_id!r}, {prompt_kind!r}, attempt {attempt})")
        self.key = (sentence_id, prompt_kind, attempt)


class Provider(Protocol):
    def complete(self, request: PromptRequest, sentence_id: str, attempt: int) -> str: ...


class MockProvider:
    """Replays canned completions from a JSONL fixture file.

    Each line holds {"sentence_id", "prompt_kind", "attempt", "raw_text"};
    attempts are numbered from 1. Every call is appended to a thread-safe log
    so tests can assert exactly how many model calls a run made.
    """

    def __init__(self, fixtures_path: str):
        self.fixtures: dict[tuple[str, str, int], str] = {}
        with open(fixtures_path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    row = json.loads(line)
                    key = (row["sentence_id"], row["prompt_kind"], int(row["attempt"]))
                    response = row["raw_text"]
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise ProviderError(f"{fixtures_path}:{line_no}: bad fixture line: {exc}") from exc
                self.fixtures[key] = response
        self._lock = threading.Lock()
        self.calls: list[tuple[str, str, int]] = []

    def complete(self, request: PromptRequest, sentence_id: str, attempt: int) -> str:
        key = (sentence_id, request.prompt_kind, attempt)
        with self._lock:
            self.calls.append(key)
        try:
            return self.fixtures[key]
        except KeyError:
            raise FixtureMissingError(*key) from None


class HttpProvider:
    """Chat-completions client for an OpenAI-style endpoint."""

    def __init__(
        self,
        endpoint: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        session: requests.Session | None = None,
    ):
        self.endpoint = endpoint
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        if not self.api_key:
            raise ProviderError(f"no API key: set {API_KEY_ENV} or pass api_key")
        self.timeout = timeout
        self.session = session or requests.Session()

    def complete(self, request: PromptRequest, sentence_id: str, attempt: int) -> str:
        payload = {
            "model": request.model_name,
            "messages": [{"role": "user", "content": request.rendered_text}],
            "temperature": request.temperature,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        try:
            resp = self.session.post(self.endpoint, json=payload, headers=headers, timeout=self.timeout)
            resp.raise_for_status()
            body = resp.json()
            return body["choices"][0]["message"]["content"]
        except requests.RequestException as exc:
            raise ProviderError(f"request failed for {sentence_id} attempt {attempt}: {exc}") from exc
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderError(f"unexpected response shape for {sentence_id}: {exc}") from exc
