from .scene import SceneRecipe, GeneratedScene, generate_scene, material_library
from .video import generate_video, iter_video, roll_frame, roll_mask, frame_offset

__all__ = [
    'SceneRecipe',
    'GeneratedScene',
    'generate_scene',
    'material_library',
    'generate_video',
    'iter_video',
    'roll_frame',
    'roll_mask',
    'frame_offset',
]
