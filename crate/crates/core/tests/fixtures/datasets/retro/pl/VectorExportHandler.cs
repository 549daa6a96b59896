public class VectorExportHandler
{
    public void ExportVector(Vector vector)
    {
        _vectorStore.Export(vector);
    }
    public void AssignExport(Export export)
    {
        _exportStore.Assign(export);
    }
    public void NotifyExport(Export export)
    {
        _exportStore.Notify(export);
    }
}
