#!/usr/bin/env python3
"""
Gallery Registry
Named worked instances (Y, X, j) loaded from parameters/gallery.json
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from core.errors import UnknownGalleryError
from core.spaces import NetMap, build_discrete_map, build_gallery_map, refine_gallery_map


@dataclass
class GalleryConfig:
    """Configuration for one gallery instance"""

    name: str
    map_name: str
    resolution: Any
    description: str = ""
    parameters: Dict[str, Any] = field(default_factory=dict)
    extras: List[str] = field(default_factory=list)
    fiber_sizes: Optional[List[int]] = None
    mass_sweep: Optional[Dict[str, Any]] = None

    @property
    def uses_depth(self) -> bool:
        return self.map_name == "dyadic"

    def build_map(self, resolution=None) -> NetMap:
        if self.map_name == "discrete":
            return build_discrete_map(self.fiber_sizes or [1], name=self.name)
        return build_gallery_map(self.map_name, self.resolution if resolution is None else resolution)

    def refined_map(self, resolution=None) -> Optional[NetMap]:
        """The instance one refinement finer; finite instances have none"""
        if self.map_name == "discrete":
            return None
        return refine_gallery_map(self.map_name, self.resolution if resolution is None else resolution)

    def resolved_parameters(self, j: NetMap) -> Dict[str, Any]:
        """Gallery overrides with 'spacing' replaced by the base spacing of j"""
        return {key: (j.codomain.spacing if value == "spacing" else value)
                for key, value in self.parameters.items()}


class GalleryRegistry:
    """Registry of gallery instances"""

    def __init__(self, config_file: Optional[Path] = None):
        self.config_file = config_file or Path(__file__).parent / 'parameters' / 'gallery.json'
        self.galleries = self._load()

    def _load(self) -> Dict[str, GalleryConfig]:
        logger = logging.getLogger(__name__)
        with open(self.config_file, 'r') as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ValueError("Top-level gallery JSON must be an object")

        galleries = {}
        for name, entry in data.items():
            galleries[name] = GalleryConfig(
                name=name,
                map_name=entry['map'],
                resolution=entry['resolution'],
                description=entry.get('description', ''),
                parameters=entry.get('parameters', {}),
                extras=entry.get('extras', []),
                fiber_sizes=entry.get('fiber_sizes'),
                mass_sweep=entry.get('mass_sweep'),
            )
        logger.debug(f"Loaded {len(galleries)} gallery instances from {self.config_file}")
        return galleries

    def get_gallery(self, name: str) -> Optional[GalleryConfig]:
        """Get configuration for a specific gallery instance"""
        return self.galleries.get(name.lower())

    def require(self, name: str) -> GalleryConfig:
        config = self.get_gallery(name)
        if config is None:
            raise UnknownGalleryError(f"Unknown gallery: {name}. Available: {', '.join(self.list_galleries())}")
        return config

    def list_galleries(self) -> List[str]:
        return list(self.galleries.keys())

    def is_gallery_name(self, name: str) -> bool:
        return name.lower() in self.galleries


def get_gallery_registry() -> GalleryRegistry:
    """Get the gallery registry instance"""
    return GalleryRegistry()
