#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        run_config.py
# Purpose:     Declarative run configuration (TOML) of scenes, media and engines
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
A run is described by a TOML file::

    [scene]
    dimension = 2
    domain = { lower = [-1.0, -1.0], upper = [1.0, 1.0] }
    illuminated = ["left"]
    measured = ["right"]

    [[scene.absorbers]]
    center = [0.0, 0.0]
    radius = 0.2

    [sweep]
    center = [0.0, 0.0]
    radii = { start = 0.02, stop = 0.6, step = 0.02 }
    thickness = 2.0

    [medium]
    spectrum = "isotropic"
    wavenumber = 1.0
    level = 1.0

    [engine]
    kind = "diffusion"

    [engine.diffusion]
    grid_spacing = 0.01

    [outputs]
    directory = "out"

Unknown keys are rejected. Errors are reported as ``<file>:<line>: <field>: <reason>``.
"""
import hashlib
import math
try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import logging
import re

from ..boundary.hfunction import MAP_MODES, compute_h_function, map_boundary_source
from ..correlation.sweep import SweepParams
from ..medium.kernel import TransportCoefficients
from ..medium.spectrum import GaussianCorrelation, IsotropicConstant, load_tabulated_spectrum
from ..scene.regions import RegionUnion, region_from_dict, Disk
from ..scene.scene import Box, Scene
from ..scene.shift import ShiftField, ShiftRegime
from ..transport.transport_runner import DEFAULT_BATCH_SIZE, DEFAULT_LANE_WIDTH
from ..utils.numerics import InvalidInputError
from ..utils.sweep_iterators import radii_from_spec

_logger = logging.getLogger("specklelib.RunConfig")

__all__ = ['ConfigError', 'RunConfig', 'MediumConfig', 'McConfig', 'DiffusionConfig', 'SweepConfig',
           'OutputConfig', 'parse_config', 'resolve_config', 'BUNDLED_CONFIGS', 'ENGINE_KINDS']

CONFIG_DIR = Path(__file__).resolve().parent.parent / 'configs'
BUNDLED_CONFIGS = ('wavefront_no_absorber', 'wavefront_centered_absorber', 'wavefront_offset_absorber')
ENGINE_KINDS = ('mc', 'diffusion', 'both')
SPECTRA = ('gaussian', 'isotropic', 'tabulated', 'synthetic')

_SECTIONS = {'scene', 'sweep', 'medium', 'engine', 'outputs'}
_SCENE_KEYS = {'dimension', 'domain', 'illuminated', 'measured', 'reflecting', 'aperture_deg', 'launch',
               'source_intensity', 'boundary_mode', 'absorbers', 'shift'}
_SHIFT_KEYS = {'regime', 'amplitude', 'profile', 'support'}
_SWEEP_KEYS = {'center', 'radii', 'thickness', 'regime', 'amplitude', 'profile'}
_MEDIUM_KEYS = {'gaussian': {'spectrum', 'wavenumber', 'correlation_length'},
                'isotropic': {'spectrum', 'wavenumber', 'level'},
                'tabulated': {'spectrum', 'wavenumber', 'table'},
                'synthetic': {'spectrum', 'wavenumber', 'sigma_total', 'anisotropy_g'}}
_MC_KEYS = {'n_packets', 'seed', 'workers', 'batch_size', 'lane_width', 'segment_bins'}
_DIFFUSION_KEYS = {'grid_spacing', 'solver_tol'}
_OUTPUT_KEYS = {'directory', 'dump_fields', 'dump_tally', 'curve_csv'}


class ConfigError(InvalidInputError):
    """
    Invalid run configuration.

    :param reason: what is wrong
    :param path: the configuration file
    :param line: line of the offending entry, 0 when unknown
    :param field: dotted name of the offending entry
    """

    def __init__(self, reason: str, path: Union[str, Path, None] = None, line: int = 0, field: str = ''):
        super().__init__(f"{path}:{line}: {field}: {reason}")
        self.reason = reason
        self.path = path
        self.line = line
        self.field = field


class _Locator(object):
    """Maps the dotted key names of a TOML text to their line numbers"""

    _header = re.compile(r'^\s*(\[\[?)\s*([A-Za-z0-9_.\- ]+?)\s*\]\]?')
    _key = re.compile(r'^\s*([A-Za-z0-9_\-]+)\s*=')
    _inline = re.compile(r'([A-Za-z0-9_\-]+)\s*=')

    def __init__(self, path, text: str):
        self.path = path
        self.lines: Dict[str, int] = {}
        counters: Dict[str, int] = {}
        prefix = ''
        for lineno, line in enumerate(text.splitlines(), start=1):
            header = self._header.match(line)
            if header:
                name = header.group(2).replace(' ', '')
                if header.group(1) == '[[':
                    index = counters.get(name, 0)
                    counters[name] = index + 1
                    self.lines.setdefault(name, lineno)
                    name = f"{name}[{index}]"
                prefix = name
                self.lines.setdefault(prefix, lineno)
                continue
            key = self._key.match(line)
            if key:
                name = f"{prefix}.{key.group(1)}" if prefix else key.group(1)
                self.lines.setdefault(name, lineno)
                rest = line[key.end():]
                if '{' in rest:
                    for inner in self._inline.findall(rest):
                        self.lines.setdefault(f"{name}.{inner}", lineno)

    def line_of(self, name: str) -> int:
        while name:
            if name in self.lines:
                return self.lines[name]
            if name.endswith(']'):
                name = re.sub(r'\[\d+\]$', '', name)
            elif '.' in name:
                name = name.rsplit('.', 1)[0]
            else:
                name = ''
        return 0

    def error(self, name: str, reason: str) -> ConfigError:
        return ConfigError(reason, self.path, self.line_of(name), name)

    @contextmanager
    def anchored(self, name: str):
        """Converts the invalid-input errors raised inside the block into a ConfigError on the given field"""
        try:
            yield
        except ConfigError:
            raise
        except (InvalidInputError, TypeError, ValueError, KeyError) as err:
            raise self.error(name, str(err)) from None

    def table(self, value, name: str, allowed, required=()) -> dict:
        if not isinstance(value, dict):
            raise self.error(name, "expected a table")
        for key in value:
            if key not in allowed:
                raise self.error(f"{name}.{key}", f"unknown key, expected one of {sorted(allowed)}")
        for key in required:
            if key not in value:
                raise self.error(name, f"missing key '{key}'")
        return value

    def number(self, table: dict, key: str, name: str, default=None, positive=False, integer=False):
        if key not in table:
            if default is None:
                raise self.error(name, f"missing key '{key}'")
            return default
        value = table[key]
        kind = int if integer else (int, float)
        if isinstance(value, bool) or not isinstance(value, kind):
            raise self.error(f"{name}.{key}", f"expected {'an integer' if integer else 'a number'}")
        if positive and not value > 0:
            raise self.error(f"{name}.{key}", "must be positive")
        return value

    def names(self, table: dict, key: str, name: str, default) -> tuple:
        value = table.get(key, default)
        if isinstance(value, str):
            value = [value]
        if not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
            raise self.error(f"{name}.{key}", "expected a list of side names")
        return tuple(value)


@dataclass
class MediumConfig:
    """Medium description; build() turns it into transport coefficients"""
    spectrum: str = 'isotropic'
    wavenumber: float = 1.0
    correlation_length: float = 1.0
    level: float = 1.0
    table: Optional[Path] = None
    sigma_total: float = 1.0
    anisotropy_g: float = 0.0

    def build(self, dimension: int) -> TransportCoefficients:
        if self.spectrum == 'synthetic':
            return TransportCoefficients.synthetic(self.sigma_total, self.anisotropy_g, dimension, self.wavenumber)
        if self.spectrum == 'gaussian':
            model = GaussianCorrelation(self.correlation_length, dimension)
        elif self.spectrum == 'isotropic':
            model = IsotropicConstant(self.level, dimension)
        else:
            model = load_tabulated_spectrum(self.table, dimension)
        return TransportCoefficients.from_spectrum(model, self.wavenumber)


@dataclass
class McConfig:
    n_packets: int = 100000
    seed: int = 0
    workers: Optional[int] = None
    batch_size: int = DEFAULT_BATCH_SIZE
    lane_width: int = DEFAULT_LANE_WIDTH
    segment_bins: int = 0


@dataclass
class DiffusionConfig:
    grid_spacing: float = 0.01
    solver_tol: float = 1e-10


@dataclass
class SweepConfig:
    center: tuple = (0.0, 0.0)
    radii: List[float] = field(default_factory=list)
    thickness: float = 0.1
    regime: ShiftRegime = ShiftRegime.LARGE
    amplitude: float = 1.0
    profile: str = 'bump'


@dataclass
class OutputConfig:
    directory: Path = Path('out')
    dump_fields: bool = False
    dump_tally: bool = False
    curve_csv: str = 'curve.csv'


@dataclass
class RunConfig:
    """
    Validated run configuration.

    :param path: the configuration file
    :param digest: sha256 of the file contents
    :param scene: the scene, its shift field is the static one of [scene.shift]
    :param medium: the medium description
    :param engine: 'mc', 'diffusion' or 'both'
    :param mc: Monte Carlo parameters
    :param diffusion: diffusion parameters
    :param sweep: wavefront sweep, None when the file has no [sweep] section
    :param outputs: output settings
    :param boundary_mode: map from the transport source to the diffusion datum, see map_boundary_source()
    """
    path: Path
    digest: str
    scene: Scene
    medium: MediumConfig = field(default_factory=MediumConfig)
    engine: str = 'diffusion'
    mc: McConfig = field(default_factory=McConfig)
    diffusion: DiffusionConfig = field(default_factory=DiffusionConfig)
    sweep: Optional[SweepConfig] = None
    outputs: OutputConfig = field(default_factory=OutputConfig)
    boundary_mode: str = 'isotropic-identity'

    @property
    def engines(self) -> tuple:
        return ('mc', 'diffusion') if self.engine == 'both' else (self.engine,)

    def coefficients(self) -> TransportCoefficients:
        return self.medium.build(self.scene.dimension)

    def diffusion_datum(self) -> float:
        """Dirichlet datum q of a Lambertian boundary source of the scene's intensity"""
        if self.boundary_mode == 'isotropic-identity':
            return self.scene.source_intensity
        h = compute_h_function(1.0)
        q = map_boundary_source(self.scene.source_intensity, h, self.boundary_mode)
        return float(q(None))

    def sweep_params(self, coeffs: Optional[TransportCoefficients] = None,
                     dump_dir: Optional[Path] = None) -> SweepParams:
        sweep = self.sweep or SweepConfig()
        return SweepParams(center=sweep.center, thickness=sweep.thickness, regime=sweep.regime,
                           amplitude=sweep.amplitude, profile=sweep.profile, coeffs=coeffs,
                           grid_spacing=self.diffusion.grid_spacing, solver_tol=self.diffusion.solver_tol,
                           n_packets=self.mc.n_packets, seed=self.mc.seed, n_workers=self.mc.workers,
                           batch_size=self.mc.batch_size, lane_width=self.mc.lane_width,
                           datum=self.diffusion_datum(), dump_dir=dump_dir)


def resolve_config(name_or_path: Union[str, Path]) -> Path:
    """A configuration file path, or the path of a bundled configuration given by name"""
    path = Path(name_or_path)
    if path.is_file():
        return path
    bundled = CONFIG_DIR / f"{path.stem}.toml"
    if path.stem in BUNDLED_CONFIGS and bundled.is_file():
        return bundled
    raise FileNotFoundError(f"Configuration '{name_or_path}' not found")


def _parse_scene(loc: _Locator, raw: dict):
    table = loc.table(raw, 'scene', _SCENE_KEYS, required=('domain',))
    dimension = loc.number(table, 'dimension', 'scene', default=2, integer=True)
    if dimension not in (2, 3):
        raise loc.error('scene.dimension', "must be 2 or 3")
    domain = loc.table(table['domain'], 'scene.domain', {'lower', 'upper'}, required=('lower', 'upper'))
    with loc.anchored('scene.domain'):
        box = Box(domain['lower'], domain['upper'])
    if box.dimension != dimension:
        raise loc.error('scene.domain', f"expected {dimension} coordinates per corner")
    illuminated = loc.names(table, 'illuminated', 'scene', ['left'])
    measured = loc.names(table, 'measured', 'scene', ['right'])
    reflecting = loc.names(table, 'reflecting', 'scene', [])
    if set(illuminated) & set(measured):
        raise loc.error('scene.measured', "illuminated and measured boundaries intersect")
    aperture = loc.number(table, 'aperture_deg', 'scene', default=90.0, positive=True)
    if aperture > 90:
        raise loc.error('scene.aperture_deg', "must lie in (0, 90]")
    mode = table.get('boundary_mode', 'isotropic-identity')
    if mode not in MAP_MODES:
        raise loc.error('scene.boundary_mode', f"expected one of {MAP_MODES}")

    absorbers = []
    for i, item in enumerate(table.get('absorbers', [])):
        name = f'scene.absorbers[{i}]'
        loc.table(item, name, {'center', 'radius'}, required=('center', 'radius'))
        with loc.anchored(name):
            absorbers.append(Disk(item['center'], item['radius']))

    shift = ShiftField()
    if 'shift' in table:
        spec = loc.table(table['shift'], 'scene.shift', _SHIFT_KEYS)
        with loc.anchored('scene.shift.regime'):
            regime = ShiftRegime.parse(spec.get('regime', 'none'))
        support = None
        parts = []
        for i, item in enumerate(spec.get('support', [])):
            with loc.anchored(f'scene.shift.support[{i}]'):
                parts.append(region_from_dict(item))
        if parts:
            support = parts[0] if len(parts) == 1 else RegionUnion(parts)
        with loc.anchored('scene.shift'):
            shift = ShiftField(regime, support, float(spec.get('amplitude', 1.0)), spec.get('profile', 'bump'))

    with loc.anchored('scene'):
        scene = Scene(box, illuminated=illuminated, measured=measured, absorbers=tuple(absorbers), shift=shift,
                      aperture_half_angle=math.radians(aperture), launch=table.get('launch', 'lambertian'),
                      source_intensity=float(loc.number(table, 'source_intensity', 'scene', default=1.0)),
                      reflecting=reflecting)
    return scene, mode


def _parse_sweep(loc: _Locator, raw: dict, scene: Scene) -> SweepConfig:
    table = loc.table(raw, 'sweep', _SWEEP_KEYS, required=('radii',))
    center = table.get('center', list((scene.box.lower + scene.box.upper) / 2))
    if not isinstance(center, list) or len(center) != scene.dimension:
        raise loc.error('sweep.center', f"expected {scene.dimension} coordinates")
    with loc.anchored('sweep.radii'):
        radii = radii_from_spec(table['radii'])
    if radii and not scene.box.strictly_contains(Disk(center, radii[-1])):
        raise loc.error('sweep.radii', f"the wavefront of radius {radii[-1]} leaves the domain")
    with loc.anchored('sweep.regime'):
        regime = ShiftRegime.parse(table.get('regime', 'large'))
    if regime is ShiftRegime.NONE:
        raise loc.error('sweep.regime', "a sweep needs a regime other than 'none'")
    return SweepConfig(center=tuple(float(c) for c in center), radii=radii,
                       thickness=float(loc.number(table, 'thickness', 'sweep', default=0.1, positive=True)),
                       regime=regime, amplitude=float(loc.number(table, 'amplitude', 'sweep', default=1.0)),
                       profile=table.get('profile', 'bump'))


def _parse_medium(loc: _Locator, raw: dict, base_dir: Path) -> MediumConfig:
    if not isinstance(raw, dict):
        raise loc.error('medium', "expected a table")
    spectrum = raw.get('spectrum', 'isotropic')
    if spectrum not in SPECTRA:
        raise loc.error('medium.spectrum', f"expected one of {SPECTRA}")
    table = loc.table(raw, 'medium', _MEDIUM_KEYS[spectrum])
    medium = MediumConfig(spectrum=spectrum,
                          wavenumber=float(loc.number(table, 'wavenumber', 'medium', default=1.0, positive=True)))
    if spectrum == 'gaussian':
        medium.correlation_length = float(loc.number(table, 'correlation_length', 'medium', default=1.0,
                                                     positive=True))
    elif spectrum == 'isotropic':
        medium.level = float(loc.number(table, 'level', 'medium', default=1.0, positive=True))
    elif spectrum == 'tabulated':
        if not isinstance(table.get('table'), str):
            raise loc.error('medium.table', "expected the path of a two-column table")
        medium.table = (base_dir / table['table']).resolve()
    else:
        medium.sigma_total = float(loc.number(table, 'sigma_total', 'medium', positive=True))
        medium.anisotropy_g = float(loc.number(table, 'anisotropy_g', 'medium', default=0.0))
        if not -1 < medium.anisotropy_g < 1:
            raise loc.error('medium.anisotropy_g', "must lie in (-1, 1)")
    return medium


def _parse_engine(loc: _Locator, raw: dict):
    table = loc.table(raw, 'engine', {'kind', 'mc', 'diffusion'}, required=('kind',))
    kind = table['kind']
    if kind not in ENGINE_KINDS:
        raise loc.error('engine.kind', f"expected one of {ENGINE_KINDS}")
    for block in ('mc', 'diffusion'):
        if block in table and kind not in (block, 'both'):
            raise loc.error(f'engine.{block}', f"engine '{kind}' doesn't use an [engine.{block}] block")
    mc = McConfig()
    if 'mc' in table:
        spec = loc.table(table['mc'], 'engine.mc', _MC_KEYS)
        mc = McConfig(n_packets=loc.number(spec, 'n_packets', 'engine.mc', default=mc.n_packets, positive=True,
                                           integer=True),
                      seed=loc.number(spec, 'seed', 'engine.mc', default=0, integer=True),
                      workers=None if 'workers' not in spec else
                      loc.number(spec, 'workers', 'engine.mc', positive=True, integer=True),
                      batch_size=loc.number(spec, 'batch_size', 'engine.mc', default=DEFAULT_BATCH_SIZE,
                                            positive=True, integer=True),
                      lane_width=loc.number(spec, 'lane_width', 'engine.mc', default=DEFAULT_LANE_WIDTH,
                                            positive=True, integer=True),
                      segment_bins=loc.number(spec, 'segment_bins', 'engine.mc', default=0, integer=True))
        if mc.seed < 0:
            raise loc.error('engine.mc.seed', "must be non-negative")
    diffusion = DiffusionConfig()
    if 'diffusion' in table:
        spec = loc.table(table['diffusion'], 'engine.diffusion', _DIFFUSION_KEYS)
        diffusion = DiffusionConfig(
            grid_spacing=float(loc.number(spec, 'grid_spacing', 'engine.diffusion', default=0.01, positive=True)),
            solver_tol=float(loc.number(spec, 'solver_tol', 'engine.diffusion', default=1e-10, positive=True)))
    return kind, mc, diffusion


def _parse_outputs(loc: _Locator, raw: dict) -> OutputConfig:
    table = loc.table(raw, 'outputs', _OUTPUT_KEYS)
    outputs = OutputConfig()
    if 'directory' in table:
        outputs.directory = Path(table['directory'])
    for key in ('dump_fields', 'dump_tally'):
        if key in table:
            if not isinstance(table[key], bool):
                raise loc.error(f'outputs.{key}', "expected true or false")
            setattr(outputs, key, table[key])
    if 'curve_csv' in table:
        outputs.curve_csv = str(table['curve_csv'])
    return outputs


def parse_config(name_or_path: Union[str, Path]) -> RunConfig:
    """
    Reads and validates a run configuration.

    :param name_or_path: path of a TOML file, or the name of a bundled configuration
    :returns: the validated RunConfig
    :raises ConfigError: on syntax errors, unknown keys or violated invariants
    :raises FileNotFoundError: if the file doesn't exist
    """
    path = resolve_config(name_or_path)
    data = path.read_bytes()
    text = data.decode('utf-8')
    loc = _Locator(path, text)
    try:
        raw: Dict[str, Any] = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        match = re.search(r'line (\d+)', str(err))
        raise ConfigError(str(err), path, int(match.group(1)) if match else 0, 'syntax') from None
    for key in raw:
        if key not in _SECTIONS:
            raise loc.error(key, f"unknown section, expected one of {sorted(_SECTIONS)}")
    if 'scene' not in raw:
        raise ConfigError("missing [scene] section", path, 0, 'scene')
    if 'engine' not in raw:
        raise ConfigError("missing [engine] section", path, 0, 'engine')

    scene, mode = _parse_scene(loc, raw['scene'])
    sweep = _parse_sweep(loc, raw['sweep'], scene) if 'sweep' in raw else None
    medium = _parse_medium(loc, raw.get('medium', {}), path.parent)
    engine, mc, diffusion = _parse_engine(loc, raw['engine'])
    outputs = _parse_outputs(loc, raw.get('outputs', {}))
    config = RunConfig(path=path, digest=hashlib.sha256(data).hexdigest(), scene=scene, medium=medium,
                       engine=engine, mc=mc, diffusion=diffusion, sweep=sweep, outputs=outputs, boundary_mode=mode)
    _logger.info("Configuration %s loaded: engine %s, %s", path, engine,
                 f"{len(sweep.radii)} radii" if sweep else "static scene")
    return config
