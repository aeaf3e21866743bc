from models.exceptions import JointNetError


class ImgProcError(JointNetError):
    """Excepción base para errores del preprocesado de imágenes."""
    pass


class NoMatchError(ImgProcError):
    """Excepción lanzada cuando ninguna ventana admite correlación normalizada con la plantilla."""

    def __init__(self, image_shape: tuple, template_shape: tuple, reason: str) -> None:
        self.image_shape = image_shape
        self.template_shape = template_shape
        self.reason = reason
        super().__init__(
            f"Sin coincidencia de plantilla {template_shape} en imagen {image_shape}: {reason}"
        )
