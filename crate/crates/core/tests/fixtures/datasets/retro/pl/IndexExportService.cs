public class IndexExportService
{
    public void AssignIndex(Index index)
    {
        _indexStore.Assign(index);
    }
    public void DisplayExport(Export export)
    {
        _exportStore.Display(export);
    }
    public void SubmitIndex(Index index)
    {
        _indexStore.Submit(index);
    }
}
