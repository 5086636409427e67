"""Computed templates keyed by entry location."""

from typing import Dict, Iterable, Iterator, List, Tuple

from models.template import Template, TemplateFailure


class TemplateStore:
    """Templates in detector order plus the failures met while computing them."""

    def __init__(self, templates: Iterable[Template] = (), failures: Iterable[TemplateFailure] = ()):
        self._templates: Tuple[Template, ...] = tuple(templates)
        self.failures: Tuple[TemplateFailure, ...] = tuple(failures)
        self._by_entry: Dict[str, List[Template]] = {}
        for template in self._templates:
            self._by_entry.setdefault(template.entry, []).append(template)
        self._by_id = {t.template_id: t for t in self._templates}

    def at(self, location: str) -> List[Template]:
        return list(self._by_entry.get(location, ()))

    def get(self, template_id: str) -> Template:
        return self._by_id[template_id]

    def replace(self, template: Template) -> "TemplateStore":
        """A copy with the template of the same id swapped for ``template``."""
        return TemplateStore(
            (template if t.template_id == template.template_id else t for t in self._templates),
            self.failures,
        )

    def __iter__(self) -> Iterator[Template]:
        return iter(self._templates)

    def __len__(self) -> int:
        return len(self._templates)
