public class ReportViewManager
{
    public void AddView(View view)
    {
        _viewStore.Add(view);
    }
    public void NotifyReport(Report report)
    {
        _reportStore.Notify(report);
    }
    public void EditView(View view)
    {
        _viewStore.Edit(view);
    }
}
