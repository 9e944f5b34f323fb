import json
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

from pydantic import TypeAdapter, ValidationError

from .errors import CategoryError, FileFormatError
from .fincat import FiniteCategory, MorphismClass, validate_category
from .modelstruct import GeneratingData, ModelStructure
from .models import CategoryDocument, GeneratingFile, StructureFile

logger = logging.getLogger(__name__)

CLASS_TOKENS = ("@all", "@isos", "@identities")

_CATEGORY_DOCUMENT = TypeAdapter(CategoryDocument)


def _line_of(text: str, key: Any) -> Optional[int]:
    """1-based line of the first occurrence of a JSON key or value, if it can be found."""
    needle = f'"{key}"' if isinstance(key, str) else None
    if needle is None:
        return None
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


class FileLoader:
    """Reads category, structure and generator files.

    Categories are cached by absolute path, so structures that reference the same file
    share one category instance.
    """

    def __init__(self):
        self._categories: Dict[str, FiniteCategory] = {}

    def read_json(self, path: str) -> Tuple[Any, str]:
        """Parsed JSON and the raw text, kept for locating errors by line."""
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        try:
            return json.loads(text), text
        except json.JSONDecodeError as e:
            raise FileFormatError(path, e.msg, line=e.lineno) from None

    def _parse(self, path: str, adapter_or_model, data: Any, text: str):
        try:
            if isinstance(adapter_or_model, TypeAdapter):
                return adapter_or_model.validate_python(data)
            return adapter_or_model.model_validate(data)
        except ValidationError as e:
            error = e.errors()[0]
            loc = list(error["loc"])
            field = ".".join(str(part) for part in loc) or None
            named = [part for part in loc if isinstance(part, str)]
            line = _line_of(text, named[-1]) if named else None
            raise FileFormatError(path, error["msg"], line=line, field=field) from None

    def load_category(self, path: str) -> FiniteCategory:
        """Read a category or poset file and validate every category law."""
        key = os.path.abspath(path)
        if key in self._categories:
            return self._categories[key]

        data, text = self.read_json(path)
        document = self._parse(path, _CATEGORY_DOCUMENT, data, text)
        try:
            category = validate_category(document)
        except CategoryError as e:
            raise CategoryError(f"{path}: {e}", witness=e.witness) from None

        self._categories[key] = category
        logger.info(f"Loaded category {category.name} from {path}")
        return category

    def _category_for(self, path: str, reference: str,
                      category: Optional[FiniteCategory]) -> FiniteCategory:
        if category is not None:
            return category
        if not os.path.isabs(reference):
            reference = os.path.join(os.path.dirname(os.path.abspath(path)), reference)
        return self.load_category(reference)

    def resolve_class(self, category: FiniteCategory, members: List[str],
                      path: str = "<class>", field: Optional[str] = None) -> MorphismClass:
        """Morphism ids plus the tokens @all, @isos and @identities."""
        cls = category.empty()
        ids = []
        for member in members:
            if member == "@all":
                cls = cls | category.all_morphisms()
            elif member == "@isos":
                cls = cls | category.isomorphisms()
            elif member == "@identities":
                cls = cls | category.identities()
            elif member in category.morphism_index:
                ids.append(member)
            else:
                raise FileFormatError(path, f"unknown morphism {member!r} in {category.name}; "
                                            f"tokens are {', '.join(CLASS_TOKENS)}",
                                      field=field)
        return cls | category.morphism_class(ids)

    def load_structure(self, path: str,
                       category: Optional[FiniteCategory] = None) -> ModelStructure:
        """Read a structure file; its category path is relative to the file itself."""
        data, text = self.read_json(path)
        document: StructureFile = self._parse(path, StructureFile, data, text)
        base = self._category_for(path, document.category, category)
        structure = ModelStructure(base,
                                   cof=self.resolve_class(base, document.cof, path, "cof"),
                                   fib=self.resolve_class(base, document.fib, path, "fib"),
                                   weq=self.resolve_class(base, document.weq, path, "weq"),
                                   name=document.name or os.path.splitext(os.path.basename(path))[0])
        logger.info(f"Loaded structure {structure.name} on {base.name}")
        return structure

    def load_generators(self, path: str,
                        category: Optional[FiniteCategory] = None) -> GeneratingData:
        """Read generating data (I, J, W) for the recognition theorem."""
        data, text = self.read_json(path)
        document: GeneratingFile = self._parse(path, GeneratingFile, data, text)
        base = self._category_for(path, document.category, category)
        return GeneratingData(base,
                              gen_cof=self.resolve_class(base, document.gen_cof, path, "I"),
                              gen_acyclic_cof=self.resolve_class(base, document.gen_acyclic_cof, path, "J"),
                              weq=self.resolve_class(base, document.weq, path, "weq"),
                              name=document.name or os.path.splitext(os.path.basename(path))[0])


def parse_class_argument(category: FiniteCategory, argument: str) -> MorphismClass:
    """A comma-separated member list as given on the command line."""
    members = [part.strip() for part in argument.split(",") if part.strip()]
    return FileLoader().resolve_class(category, members, path="<argument>")
