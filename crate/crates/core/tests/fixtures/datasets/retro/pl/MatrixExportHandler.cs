public class MatrixExportHandler
{
    public void ApproveMatrix(Matrix matrix)
    {
        _matrixStore.Approve(matrix);
    }
    public void AssignExport(Export export)
    {
        _exportStore.Assign(export);
    }
}
